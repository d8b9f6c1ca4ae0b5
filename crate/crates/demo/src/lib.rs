//! Browser bindings: twist a Hopf presentation, tabulate invariant dimensions,
//! and run the fusion random walk.

use std::fmt::Write as _;

use wasm_bindgen::prelude::*;

use gtwist_core::comodule::verify_invariant_correspondence;
use gtwist_core::format::{self, Source};
use gtwist_core::fusion::{chain_group, Measure, Values};
use gtwist_core::hopf::{graded_twist, InvariantCocentralAction};
use gtwist_core::CycScalar;

const EXAMPLES: [(&str, &str); 8] = [
    ("sl2.hopf", include_str!("../../../gallery/sl2.hopf")),
    ("z2-sign.tau", include_str!("../../../gallery/z2-sign.tau")),
    ("gl2-z4.hopf", include_str!("../../../gallery/gl2-z4.hopf")),
    (
        "gl2-z4-diag.tau",
        include_str!("../../../gallery/gl2-z4-diag.tau"),
    ),
    ("Q8.grp", include_str!("../../../gallery/Q8.grp")),
    ("BD16.grp", include_str!("../../../gallery/BD16.grp")),
    ("ising.fus", include_str!("../../../gallery/ising.fus")),
    (
        "fibonacci.fus",
        include_str!("../../../gallery/fibonacci.fus"),
    ),
];

/// Gallery file by name, for the page's presets.
#[wasm_bindgen]
pub fn example(name: &str) -> Option<String> {
    EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
}

#[wasm_bindgen(js_name = twistHopf)]
pub fn twist_hopf_js(hopf: &str, tau: &str) -> Result<String, JsError> {
    twist_hopf(hopf, tau).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = invariantTable)]
pub fn invariant_table_js(group: &str, max_degree: usize) -> Result<String, JsError> {
    invariant_table(group, max_degree).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = fusionWalk)]
pub fn fusion_walk_js(fusion: &str, object: &str, steps: usize) -> Result<String, JsError> {
    fusion_walk(fusion, object, steps).map_err(|e| JsError::new(&e))
}

pub fn twist_hopf(hopf: &str, tau: &str) -> Result<String, String> {
    let h = format::parse_hopf(Source::new("hopf", hopf)).map_err(|e| e.to_string())?;
    let t = format::parse_tau(Source::new("tau", tau), h.base()).map_err(|e| e.to_string())?;
    let x = InvariantCocentralAction::new(h, t).map_err(|e| e.to_string())?;
    let tw = graded_twist(&x).map_err(|e| e.to_string())?;
    Ok(format::write_hopf(&tw))
}

pub fn invariant_table(group: &str, max_degree: usize) -> Result<String, String> {
    if max_degree > 16 {
        return Err("max degree is capped at 16 in the browser".into());
    }
    let spec =
        format::parse_matrix_group(Source::new("group", group)).map_err(|e| e.to_string())?;
    let q = spec.q.unwrap_or_else(|| CycScalar::from_int(-1));
    let rep =
        verify_invariant_correspondence(&spec.group, &q, max_degree).map_err(|e| e.to_string())?;
    let mut out = format!(
        "order {}, q = {q}\n\ndegree  molien  classical  twisted\n",
        spec.group.order()
    );
    for r in &rep.rows {
        let mark = if r.passed() { "" } else { "  mismatch" };
        let _ = writeln!(
            out,
            "{:>6}  {:>6}  {:>9}  {:>7}{mark}",
            r.degree,
            r.molien.to_string(),
            r.classical,
            r.twisted
        );
    }
    let _ = write!(out, "\ntwisted relations: {}", rep.twisted_rules.join(", "));
    Ok(out)
}

fn show(v: &Values, i: usize) -> String {
    match v {
        Values::Exact(w) => w[i].to_string(),
        Values::Approx(w) => format!("{:.6}", w[i]),
    }
}

/// Distribution of `X^{*n}` started at the unit, with its image in the chain group.
pub fn fusion_walk(fusion: &str, object: &str, steps: usize) -> Result<String, String> {
    if steps > 64 {
        return Err("at most 64 steps".into());
    }
    let ring = format::parse_fusion(Source::new("fusion", fusion))
        .map_err(|e| e.to_string())?
        .ring;
    let x = ring
        .index_of(object)
        .ok_or_else(|| format!("unknown simple `{object}`"))?;
    let ch = chain_group(&ring).map_err(|e| e.to_string())?;
    let n = ring.len();
    let step = Measure::point(n, x);
    let mut mu = Measure::point(n, ring.unit());
    let mut out = format!(
        "chain group: {}\n\nstep  {}  | chain\n",
        ch.describe(),
        ring.names().join("  ")
    );
    for k in 0..=steps {
        if k > 0 {
            mu = ring.convolve(&mu, &step).map_err(|e| e.to_string())?;
        }
        let cells: Vec<String> = (0..n).map(|i| show(mu.values(), i)).collect();
        let image = ch.pushforward(&mu);
        let chain: Vec<String> = (0..ch.order()).map(|g| show(&image, g)).collect();
        let _ = writeln!(out, "{k:>4}  {}  | {}", cells.join("  "), chain.join("  "));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twists_the_bundled_example() {
        let out = twist_hopf(
            &example("sl2.hopf").unwrap(),
            &example("z2-sign.tau").unwrap(),
        )
        .unwrap();
        assert!(out.contains("\"b a -> -a b\""));
    }

    #[test]
    fn invariant_table_for_q8() {
        let out = invariant_table(&example("Q8.grp").unwrap(), 4).unwrap();
        assert!(out
            .lines()
            .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["4", "2", "2", "2"]));
        assert!(!out.contains("mismatch"));
    }

    #[test]
    fn ising_walk_alternates_in_the_chain_group() {
        let out = fusion_walk(&example("ising.fus").unwrap(), "sigma", 3).unwrap();
        let rows: Vec<&str> = out
            .lines()
            .filter(|l| l.contains('|') && !l.starts_with("step"))
            .collect();
        assert_eq!(rows.len(), 4);
        assert!(rows[2].ends_with("| 1  0"));
        assert!(rows[3].ends_with("| 0  1"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fusion_walk(&example("ising.fus").unwrap(), "tau", 2).is_err());
        assert!(twist_hopf("[group]\n", "").is_err());
    }
}
