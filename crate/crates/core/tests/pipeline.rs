use std::path::PathBuf;

use proptest::prelude::*;

use gog_core::cover::{check_algebraic_embedding, embed_vertices, unfold, unfold_with};
use gog_core::elemabelian::{IndexBijection, IndexSet};
use gog_core::exec::{trial_rng, Execution};
use gog_core::freewords::{abelianization_rank, Presentation, Word};
use gog_core::gog::{build_presentation, GraphOfGroups, GraphOfGroupsFile};
use gog_core::multigraph::{random_connected, GraphFile};
use gog_core::paperlab::{
    build_sigma, build_theorem3, pi_map, separate, theorem3_witness, SemidirectModel,
    SeparationCertificate,
};
use gog_core::permgroup::{closure_with, Perm};

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn gog_file_to_presentation() {
    let file: GraphOfGroupsFile = serde_json::from_str(&data("amalgam.json")).unwrap();
    let g = file.to_gog().unwrap();
    let pres = build_presentation(&g, &g.graph().spanning_tree().unwrap()).unwrap();
    assert_eq!(pres.generators, ["u.g", "v.x", "v.y", "t_f"]);
    // The text form parses back to the same relators.
    let text: Vec<String> = pres.relators.iter().map(Word::to_string).collect();
    let again = Presentation::new(
        pres.generators.clone(),
        text.iter().map(|r| r.parse().unwrap()).collect(),
    )
    .unwrap();
    assert_eq!(again, pres);
    // Z/4 *_{Z/2} D_4 has finite abelianization; the HNN letter adds one free rank.
    assert_eq!(abelianization_rank(&pres).unwrap(), 1);
}

#[test]
fn graph_files_round_trip() {
    for name in ["theta.json", "tree.json"] {
        let file: GraphFile = serde_json::from_str(&data(name)).unwrap();
        let g = file.to_graph().unwrap();
        assert_eq!(GraphFile::from_graph(&g), file);
    }
}

#[test]
fn theta_graph_theorem3_from_file() {
    let g = serde_json::from_str::<GraphFile>(&data("theta.json"))
        .unwrap()
        .to_graph()
        .unwrap();
    let inst = build_theorem3(&g, &g.spanning_tree().unwrap(), 2).unwrap();
    for n in [2, 4, 8, 16] {
        let (w, report) = theorem3_witness(&inst, &inst.wreath_quotient(n).unwrap()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(w.control.is_empty());
    }
}

#[test]
fn unfolding_embeds_the_tree_file() {
    let g = serde_json::from_str::<GraphFile>(&data("tree.json"))
        .unwrap()
        .to_graph()
        .unwrap();
    let labeling = embed_vertices(&g, "a").unwrap();
    let u = unfold(&g, 3).unwrap();
    assert!(u.check().passed());
    assert!(labeling.image_check(&g, &u).unwrap().passed());
    let gg = GraphOfGroups::uniform_cyclic(g, 4).unwrap();
    assert!(check_algebraic_embedding(&gg, &labeling).unwrap().passed());
    assert!(
        !check_algebraic_embedding(&gg, &labeling.corrupted("d").unwrap())
            .unwrap()
            .passed()
    );
}

#[test]
fn execution_modes_agree() {
    let mut rng = trial_rng(3, 0);
    let g = gog_core::multigraph::random_tree(6, &mut rng).unwrap();
    let a = unfold_with(Execution::Sequential, &g, 3).unwrap();
    let b = unfold_with(Execution::Parallel, &g, 3).unwrap();
    assert_eq!(a.to_graph_file(), b.to_graph_file());

    let gens: Vec<Perm> = [IndexBijection::lambda(2, 8), IndexBijection::mu(2, 8)]
        .into_iter()
        .map(|b| b.unwrap().to_perm().unwrap())
        .collect();
    let mut s = closure_with(Execution::Sequential, 8, &gens, 1 << 16).unwrap();
    let mut p = closure_with(Execution::Parallel, 8, &gens, 1 << 16).unwrap();
    s.sort();
    p.sort();
    assert_eq!(s, p);
}

#[test]
fn sigma_reduces_indices_mod_n() {
    // Shifting an index by n does not change the image.
    let sigma = build_sigma(3, 9).unwrap();
    let q = pi_map(3, 9).unwrap();
    let model = SemidirectModel::p_inf(3).unwrap();
    for i in 0..40 {
        let mut rng = trial_rng(5, i);
        let x = model.random_element(&mut rng, -20..20, 5).unwrap();
        let y = sigma.apply(&x).unwrap();
        let direct = q.image(sigma.target(), &y).unwrap();
        let shifted = model
            .mul(&model.basis(9).unwrap(), &model.basis(0).unwrap())
            .unwrap();
        let z = sigma.apply(&model.mul(&shifted, &x).unwrap()).unwrap();
        // c_9 c_0 maps to c_0^2 under sigma_9, so z = c_0^2 y.
        let expected = sigma
            .target()
            .mul(
                &sigma
                    .target()
                    .pow(&sigma.target().basis(0).unwrap(), 2)
                    .unwrap(),
                &y,
            )
            .unwrap();
        assert_eq!(z, expected);
        assert_eq!(
            q.image(sigma.target(), &z).unwrap(),
            q.image(sigma.target(), &expected).unwrap()
        );
        assert_eq!(direct.degree(), 27);
    }
}

#[test]
fn separation_certificates_serialize() {
    let model = SemidirectModel::p_inf(2).unwrap();
    let x = model.basis(-5).unwrap();
    let cert = separate(&model, &x).unwrap();
    let json = serde_json::to_value(&cert).unwrap();
    assert_eq!(json["kind"], "finite_quotient");
    assert_eq!(json["n"], 16);
    assert!(matches!(
        cert,
        SeparationCertificate::FiniteQuotient { n: 16, .. }
    ));
}

#[test]
fn induced_injections_from_text() {
    let b = IndexBijection::parse(
        2,
        IndexSet::Integers,
        "mu_inf^-1 lambda_inf^-1 mu_inf lambda_inf",
    )
    .unwrap();
    assert_eq!(
        b,
        IndexBijection::alpha_inv_beta(2, IndexSet::Integers).unwrap()
    );
    assert_eq!(b.eval(0).unwrap(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pi_is_a_homomorphism_on_the_model(seed in any::<u64>(), n_exp in 1u32..4) {
        let n = 2u64.pow(n_exp);
        let model = SemidirectModel::p_n(2, n).unwrap();
        let q = pi_map(2, n).unwrap();
        let mut rng = trial_rng(seed, 0);
        let x = model.random_element(&mut rng, 0..n as i64, 6).unwrap();
        let y = model.random_element(&mut rng, 0..n as i64, 6).unwrap();
        let xy = model.mul(&x, &y).unwrap();
        let lhs = q.image(&model, &xy).unwrap();
        let rhs = &q.image(&model, &x).unwrap() * &q.image(&model, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn certificates_always_verify(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let model = SemidirectModel::p_inf(p).unwrap();
        let mut rng = trial_rng(seed, 1);
        let x = model.random_element(&mut rng, -30..30, 6).unwrap();
        prop_assume!(!x.is_identity());
        let cert = separate(&model, &x).unwrap();
        prop_assert!(cert.verify(&x).unwrap());
    }

    #[test]
    fn trivial_graph_rank(seed in any::<u64>(), n in 1usize..8, extra in 0usize..6) {
        let mut rng = trial_rng(seed, 2);
        let g = random_connected(n, extra, &mut rng).unwrap();
        let expected = g.edge_count() + 1 - g.vertex_count();
        let t = g.spanning_tree().unwrap();
        let pres = build_presentation(&GraphOfGroups::trivial(g).unwrap(), &t).unwrap();
        prop_assert_eq!(abelianization_rank(&pres).unwrap(), expected);
    }
}
