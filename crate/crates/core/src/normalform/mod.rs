//! Word problems for free constructions over finite factors.
//!
//! - [`FreeProduct`]: alternating syllable normal form.
//! - [`Amalgam`]: two factors over a common subgroup, with minimal-element coset
//!   representatives so normal forms are unique.
//! - [`HnnSpec`]: HNN-extensions of a free product by stable letters, solved by
//!   Britton reduction.
//!
//! Every reduction can record a trace of the rewrite rules it applied.

mod amalgam;
mod britton;
mod free_product;
mod group;

use serde::Serialize;

pub use amalgam::{amalgam_reduce, Amalgam, AmalgamNormalForm};
pub use britton::{britton_reduce, HnnLetter, HnnSpec, HnnWord, StableLetter};
pub use free_product::{free_product_reduce, FreeProduct, FreeProductWord, Syllable};
pub use group::{extend_hom, FiniteGroupHandle, Group, PermOps};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Two adjacent syllables of one factor multiplied together.
    Merge,
    /// A syllable became the identity and was dropped.
    Cancel,
    /// An element was split into a subgroup part and a coset representative.
    Transversal,
    /// `t^-1 g t -> g'` or `t g t^-1 -> g'` with `g` in the associated subgroup.
    Pinch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub rule: Rule,
    /// Index of the input letter being processed when the rule fired.
    pub position: usize,
}

#[derive(Debug, Default, Clone)]
pub(crate) struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn push(&mut self, rule: Rule, position: usize) {
        let step = self.steps.len();
        self.steps.push(TraceStep {
            step,
            rule,
            position,
        });
    }
}
