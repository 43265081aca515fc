//! Browser bindings for the interactive demo page: build a graph, perturb
//! an edge, plot the transfer fidelity over time, and search for the best
//! transfer window. Graphs and certificates cross the boundary as the same
//! JSON the CLI speaks.

use wasm_bindgen::prelude::*;

use pairwalk::families::FamilySpec;
use pairwalk::graph::{PairState, Perturbation};
use pairwalk::json::{certificate_to_json, graph_to_json, parse_graph};
use pairwalk::spectral::decompose;
use pairwalk::transfer::{search_pgst, SearchConfig};
use pairwalk::Result;

fn family_graph_impl(tag: &str, params: &str) -> Result<String> {
    let args: Vec<&str> = params.split_whitespace().collect();
    let g = FamilySpec::from_args(tag, &args)?.build()?;
    Ok(graph_to_json(&g))
}

fn perturb_graph_impl(graph_json: &str, a: usize, b: usize, alpha: f64) -> Result<String> {
    let g = parse_graph(graph_json)?;
    let h = g.perturb(&Perturbation::new(a, b, alpha)?)?;
    Ok(graph_to_json(&h))
}

fn twin_pairs_impl(graph_json: &str) -> Result<String> {
    let g = parse_graph(graph_json)?;
    let pairs: Vec<String> = g
        .all_twin_pairs()
        .iter()
        .map(|p| format!("[{},{}]", p.a(), p.b()))
        .collect();
    Ok(format!("[{}]", pairs.join(",")))
}

fn fidelity_curve_impl(
    graph_json: &str,
    src_a: usize,
    src_b: usize,
    dst_a: usize,
    dst_b: usize,
    t_max: f64,
    steps: usize,
) -> Result<Vec<f64>> {
    let g = parse_graph(graph_json)?;
    let src = PairState::new(src_a, src_b)?;
    let dst = PairState::new(dst_a, dst_b)?;
    let rows = pairwalk::transfer::scan_fidelity(&g, &src, &dst, 0.0, t_max, steps)?;
    Ok(rows.into_iter().map(|(_, f)| f).collect())
}

fn search_transfer_impl(
    graph_json: &str,
    src_a: usize,
    src_b: usize,
    dst_a: usize,
    dst_b: usize,
    horizon: f64,
    epsilon: f64,
) -> Result<String> {
    let g = parse_graph(graph_json)?;
    let src = PairState::new(src_a, src_b)?;
    let dst = PairState::new(dst_a, dst_b)?;
    let cfg = SearchConfig {
        horizon,
        epsilon,
        ..SearchConfig::default()
    };
    let cert = search_pgst(&g, &src, &dst, &cfg)?;
    Ok(certificate_to_json(&cert))
}

fn eigenvalues_impl(graph_json: &str) -> Result<Vec<f64>> {
    let g = parse_graph(graph_json)?;
    let d = decompose(&g.laplacian())?;
    Ok(d.eigenvalues().to_vec())
}

/// Builds a named graph family; `params` is whitespace-separated, e.g.
/// `family_graph("circulant", "8 1,3,4,5,7")`. Returns graph JSON.
#[wasm_bindgen]
pub fn family_graph(tag: &str, params: &str) -> std::result::Result<String, JsError> {
    Ok(family_graph_impl(tag, params)?)
}

/// Adds `alpha` to the weight of the edge `{a,b}`; weight zero removes it.
#[wasm_bindgen]
pub fn perturb_graph(
    graph_json: &str,
    a: usize,
    b: usize,
    alpha: f64,
) -> std::result::Result<String, JsError> {
    Ok(perturb_graph_impl(graph_json, a, b, alpha)?)
}

/// All twin pairs of the graph as a JSON array of `[a,b]`.
#[wasm_bindgen]
pub fn twin_pairs(graph_json: &str) -> std::result::Result<String, JsError> {
    Ok(twin_pairs_impl(graph_json)?)
}

/// Transfer fidelity sampled at `steps` uniform times over `[0, t_max]`.
#[wasm_bindgen]
pub fn fidelity_curve(
    graph_json: &str,
    src_a: usize,
    src_b: usize,
    dst_a: usize,
    dst_b: usize,
    t_max: f64,
    steps: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    Ok(fidelity_curve_impl(
        graph_json, src_a, src_b, dst_a, dst_b, t_max, steps,
    )?)
}

/// Searches `[0, horizon]` for the best transfer window and returns the
/// certificate JSON.
#[wasm_bindgen]
pub fn search_transfer(
    graph_json: &str,
    src_a: usize,
    src_b: usize,
    dst_a: usize,
    dst_b: usize,
    horizon: f64,
    epsilon: f64,
) -> std::result::Result<String, JsError> {
    Ok(search_transfer_impl(
        graph_json, src_a, src_b, dst_a, dst_b, horizon, epsilon,
    )?)
}

/// Laplacian eigenvalues in ascending order.
#[wasm_bindgen]
pub fn eigenvalues(graph_json: &str) -> std::result::Result<Vec<f64>, JsError> {
    Ok(eigenvalues_impl(graph_json)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_to_curve_round_trip() {
        let g = family_graph_impl("complete-bipartite", "2 4").unwrap();
        let curve = fidelity_curve_impl(&g, 0, 2, 1, 2, std::f64::consts::PI, 101).unwrap();
        assert_eq!(curve.len(), 101);
        let best = curve.iter().cloned().fold(0.0f64, f64::max);
        assert!(best >= 1.0 - 1e-6);
    }

    #[test]
    fn perturb_and_twins() {
        let g = family_graph_impl("complete-bipartite", "2 4").unwrap();
        let h = perturb_graph_impl(&g, 0, 1, 2.0).unwrap();
        assert!(h.contains("[0,1,2]"));
        assert_eq!(
            twin_pairs_impl(&h).unwrap(),
            "[[0,1],[2,3],[2,4],[2,5],[3,4],[3,5],[4,5]]"
        );
    }

    #[test]
    fn search_certificate() {
        let g = family_graph_impl("circulant", "8 1,3,4,5,7").unwrap();
        let cert = search_transfer_impl(&g, 0, 1, 4, 5, 10.0, 0.01).unwrap();
        assert!(cert.contains("\"verdict\":true"), "{cert}");
    }

    #[test]
    fn eigenvalue_listing() {
        let g = family_graph_impl("circulant", "8 1,3,4,5,7").unwrap();
        let eigs = eigenvalues_impl(&g).unwrap();
        let rounded: Vec<f64> = eigs.iter().map(|x| x.round()).collect();
        assert_eq!(rounded, vec![0.0, 4.0, 4.0, 6.0, 6.0, 6.0, 6.0, 8.0]);
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(family_graph_impl("no-such", "3").is_err());
        assert!(perturb_graph_impl("not json", 0, 1, 1.0).is_err());
        assert!(fidelity_curve_impl(r#"{"n":2,"edges":[[0,1]]}"#, 0, 0, 0, 1, 1.0, 10).is_err());
    }
}
