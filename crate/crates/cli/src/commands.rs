use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

use gog_core::cover::{check_algebraic_embedding, embed_vertices, unfold};
use gog_core::elemabelian::{
    check_lambda_mu_identities, commutator_shift_check, infinite_order_witness, p_power_exponent,
    FpVector, IndexBijection, IndexSet,
};
use gog_core::exec::{trial_rng, Execution};
use gog_core::freewords::{Presentation, Word};
use gog_core::gog::{build_presentation, GraphOfGroups, GraphOfGroupsFile};
use gog_core::multigraph::{GraphFile, SpanningTree};
use gog_core::paperlab::{
    build_theorem3, check_pi, cross_check_amalgam, separate, theorem3_witness, SemidirectModel,
};
use gog_core::permgroup::PermGroup;

use crate::{Command, Failure, Outcome};

pub fn run(c: &Command, seed: u64, trace: &dyn Fn(&str)) -> Outcome {
    match c {
        Command::BuildPresentation { file, tree } => presentation(file, tree.as_deref()),
        Command::VerifyProp41 { p, l } => lambda_mu(*p, *l),
        Command::VerifyProp42 { p, l } => pi(*p, *l),
        Command::VerifyProp43 {
            p,
            steps,
            bound,
            samples,
        } => infinite(*p, *steps, *bound, *samples, seed),
        Command::BuildTheorem3 { file, p, levels } => theorem3(file, *p, *levels, trace),
        Command::Separate { file } => separation(file),
        Command::Unfold {
            file,
            radius,
            base,
            order,
        } => unfolding(file, *radius, base.as_deref(), *order),
        Command::CrossCheck {
            p,
            n,
            trials,
            sequential,
        } => {
            let mode = if *sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let r = cross_check_amalgam(*p, *n, *trials, seed, mode)?;
            Ok((r.passed(), json!(r)))
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Library errors raised while interpreting an input file count as malformed input.
fn input<T>(r: gog_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(e.to_string()))
}

fn presentation(file: &Path, tree: Option<&[String]>) -> Outcome {
    let g = input(read_json::<GraphOfGroupsFile>(file)?.to_gog())?;
    let t = match tree {
        Some(edges) => {
            let t = SpanningTree {
                edges: edges.iter().cloned().collect(),
            };
            input(t.validate(g.graph()))?;
            t
        }
        None => g.graph().spanning_tree()?,
    };
    let pres = build_presentation(&g, &t)?;
    let text = pres.to_string();
    let round_trip = text.parse::<Presentation>()? == pres;
    let stable: Vec<&String> = pres
        .generators
        .iter()
        .filter(|x| x.starts_with("t_"))
        .collect();
    let ab = pres.abelianization()?;
    Ok((
        round_trip,
        json!({
            "tree": t.edges,
            "generators": pres.generators,
            "relators": pres.relators.iter().map(Word::to_string).collect::<Vec<_>>(),
            "stable_letters": stable,
            "abelianization": { "free_rank": ab.free_rank, "torsion": ab.torsion },
            "text": text,
        }),
    ))
}

fn window(p: u32, l: u32) -> Result<u64, Failure> {
    (p as u64)
        .checked_pow(l)
        .filter(|_| l >= 1)
        .ok_or_else(|| Failure::Input(format!("l = {l} is out of range")))
}

fn lambda_mu(p: u32, l: u32) -> Outcome {
    let n = window(p, l)?;
    input(gog_core::elemabelian::check_window(p, n))?;
    let gens = vec![
        IndexBijection::lambda(p, n)?.to_perm()?,
        IndexBijection::mu(p, n)?.to_perm()?,
    ];
    let x = PermGroup::new(n as usize, gens)?;
    let order = x.order()?;
    let p_group = p_power_exponent(order as u64, p).is_some();
    let exponent = x.exponent_divides(n as i64)?;
    let identities = check_lambda_mu_identities(p, n)?;
    Ok((
        p_group && exponent && identities,
        json!({
            "n": n,
            "order": order,
            "p_group": p_group,
            "exponent_divides_n": exponent,
            "identities": identities,
        }),
    ))
}

fn pi(p: u32, l: u32) -> Outcome {
    let n = window(p, l)?;
    input(gog_core::elemabelian::check_window(p, n))?;
    let d = IndexSet::Finite(n);
    let gens = vec![
        IndexBijection::alpha(p, d)?.to_perm()?,
        IndexBijection::beta(p, d)?.to_perm()?,
    ];
    let aut = PermGroup::new(n as usize, gens)?;
    let aut_p_group = aut.is_p_group(p)?;
    let check = check_pi(p, n)?;
    Ok((
        aut_p_group && check.passed(),
        json!({ "automorphism_order": aut.order()?, "automorphisms_p_group": aut_p_group, "pi": check }),
    ))
}

fn infinite(p: u32, steps: u64, bound: i64, samples: usize, seed: u64) -> Outcome {
    let infinite = input(infinite_order_witness(p, steps))?;
    let shift = input(commutator_shift_check(p, bound))?;
    let model = SemidirectModel::p_inf(p)?;
    let (mut certified, mut failures, mut index) = (0usize, Vec::new(), 0u64);
    while certified + failures.len() < samples {
        let mut rng = trial_rng(seed, index);
        index += 1;
        let x = model.random_element(&mut rng, -16..16, if index % 2 == 0 { 0 } else { 4 })?;
        if x.is_identity() {
            continue;
        }
        let ok = separate(&model, &x)
            .and_then(|c| c.verify(&x))
            .unwrap_or(false);
        if ok {
            certified += 1;
        } else {
            failures.push(model.display(&x).to_string());
        }
    }
    Ok((
        infinite && shift && failures.is_empty(),
        json!({
            "infinite_order": infinite,
            "commutator_shift": shift,
            "separated": certified,
            "unseparated": failures,
        }),
    ))
}

fn theorem3(file: &Path, p: u32, levels: u32, trace: &dyn Fn(&str)) -> Outcome {
    let g = input(read_json::<GraphFile>(file)?.to_graph())?;
    let t = input(g.spanning_tree())?;
    let inst = input(build_theorem3(&g, &t, p))?;
    let acts = inst.gamma_acts_as_alpha_inv_beta(-50..50)?;
    let mut quotients = vec![inst.cyclic_quotient()?];
    let mut n = 1u64;
    for _ in 0..levels {
        n *= p as u64;
        quotients.push(inst.wreath_quotient(n)?);
    }
    let mut ok = acts;
    let mut witnesses = Vec::new();
    for q in &quotients {
        trace(&format!("witness in {}", q.label));
        let (_, w) = theorem3_witness(&inst, q)?;
        ok &= w.passed();
        witnesses.push(w);
    }
    Ok((
        ok,
        json!({
            "case": inst.case,
            "tree": inst.tree.edges,
            "gamma": inst.model.display(&inst.gamma).to_string(),
            "gamma_acts_as_alpha_inv_beta": acts,
            "witnesses": witnesses,
        }),
    ))
}

#[derive(Debug, Deserialize)]
struct ElementFile {
    p: u32,
    #[serde(default)]
    vector: BTreeMap<i64, i64>,
    #[serde(default)]
    control: String,
}

fn separation(file: &Path) -> Outcome {
    let e: ElementFile = read_json(file)?;
    let model = input(SemidirectModel::p_inf(e.p))?;
    let v = input(FpVector::from_entries(e.p, IndexSet::Integers, e.vector))?;
    let w: Word = input(e.control.parse())?;
    let x = model.mul(&model.vector(v)?, &input(model.eval_word(&w))?)?;
    let element = model.display(&x).to_string();
    if x.is_identity() {
        return Ok((
            false,
            json!({ "element": element, "reason": "the element is the identity" }),
        ));
    }
    let cert = separate(&model, &x)?;
    let verified = cert.verify(&x)?;
    Ok((
        verified,
        json!({ "element": element, "certificate": cert, "verified": verified }),
    ))
}

fn unfolding(file: &Path, radius: usize, base: Option<&str>, order: usize) -> Outcome {
    let g = input(read_json::<GraphFile>(file)?.to_graph())?;
    if !input(g.is_tree())? {
        return Err(Failure::Input("the graph is not a tree".into()));
    }
    if order < 2 {
        return Err(Failure::Input("order must be at least 2".into()));
    }
    let base = match base {
        Some(b) => b.to_string(),
        None => g
            .vertices()
            .next()
            .map(str::to_string)
            .ok_or_else(|| Failure::Input("empty graph".into()))?,
    };
    let labeling = input(embed_vertices(&g, &base))?;
    let u = unfold(&g, radius)?;
    let check = u.check();
    let depth = labeling.labels.values().map(Word::len).max().unwrap_or(0);
    // The image only fits in the truncation when every label does.
    let image = if depth <= radius {
        Some(labeling.image_check(&g, &u)?)
    } else {
        None
    };
    let gg = GraphOfGroups::uniform_cyclic(g, order)?;
    let embedding = check_algebraic_embedding(&gg, &labeling)?;
    let negative = match labeling.labels.iter().find(|(_, t)| !t.is_empty()) {
        Some((v, _)) => Some(!check_algebraic_embedding(&gg, &labeling.corrupted(v)?)?.passed()),
        None => None,
    };
    let ok = check.passed()
        && image.as_ref().is_none_or(|i| i.passed())
        && embedding.passed()
        && negative.unwrap_or(true);
    let labels: BTreeMap<&String, String> = labeling
        .labels
        .iter()
        .map(|(v, t)| (v, t.to_string()))
        .collect();
    Ok((
        ok,
        json!({
            "graph": u.to_graph_file(),
            "check": check,
            "labels": labels,
            "image": image,
            "embedding": embedding,
            "corrupted_labeling_rejected": negative,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!(window(2, 3).ok(), Some(8));
        assert!(window(2, 0).is_err());
        assert!(window(3, 60).is_err());
    }

    #[test]
    fn lambda_mu_orders() {
        let (ok, w) = lambda_mu(2, 2).ok().unwrap();
        assert!(ok);
        assert_eq!(w["order"], 8);
        let (ok, w) = lambda_mu(3, 1).ok().unwrap();
        assert!(ok);
        assert_eq!(w["order"], 3);
    }

    #[test]
    fn infinite_suite_is_seeded() {
        let a = infinite(3, 50, 30, 20, 4).ok().unwrap();
        let b = infinite(3, 50, 30, 20, 4).ok().unwrap();
        assert!(a.0);
        assert_eq!(a.1, b.1);
    }
}
