//! Computable versions of the groups behind the counterexample: the amalgams
//! `P_n = A_n *_{H_n} B_n` and `P_inf`, the quotient `W_n`, the map `sigma`,
//! separation certificates, and the graph of groups whose fundamental group is
//! not residually a `p`-group.
//!
//! All of these are modelled as `H x| Q` with `H` a vector group and `Q` a free
//! product of cyclic groups; [`cross_check_amalgam`] compares that model with
//! generic amalgam normal forms.

mod crosscheck;
mod quotient;
mod semidirect;
mod separate;
mod theorem3;

pub use crosscheck::{cross_check_amalgam, CrossCheckReport, Mismatch, PnAmalgam};
pub use quotient::{
    build_pi, build_sigma, check_pi, pi_map, pn_graph_of_groups, windowed_relators,
    FinitePQuotient, PiCheck, Sigma, SigmaCertificate, VectorImage,
};
pub use semidirect::{ControlLetter, ControlWord, SemidirectElement, SemidirectModel};
pub use separate::{separate, separating_window, FiniteWitness, SeparationCertificate};
pub use theorem3::{
    build_theorem3, theorem3_witness, Theorem3Case, Theorem3Instance, Theorem3Witness,
};
