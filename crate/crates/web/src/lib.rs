//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every export returns a JSON string; the page parses it and draws.

use hypersid::hypergraph::{loose_triangle, tight_cycle, tight_cycle_minus_window};
use hypersid::kappa::kappa_tight_cycle_dp;
use hypersid::rational::{format_rational, parse_rational, to_f64};
use hypersid::witness::{
    auto_witness_tight_cycle, certify_non_sidorenko, choose_negative_point, linear_girth_kernel,
};
use hypersid::Error;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_ELL: usize = 60;

fn check_cycle(ell: usize, r: usize) -> Result<(), Error> {
    if ell > MAX_ELL {
        return Err(Error::InvalidInput(format!("demo limit is ell <= {MAX_ELL}")));
    }
    tight_cycle(ell, r).map(|_| ())
}

/// Census polynomial of `C_ell^(r)` (minus one edge when `minus_edge`),
/// sampled at `samples` points of `[-1, 0]`, plus its certified negative point.
pub fn census_curve_json(ell: usize, r: usize, minus_edge: bool, samples: usize) -> Result<Value, Error> {
    check_cycle(ell, r)?;
    let skip: &[usize] = if minus_edge { &[0] } else { &[] };
    let p = kappa_tight_cycle_dp(ell, r, skip)?;
    let n = samples.clamp(2, 2000);
    let xs: Vec<f64> = (0..n).map(|i| -1.0 + i as f64 / (n - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| p.eval_f64(x)).collect();
    let negative = choose_negative_point(&p, ell, r, skip.len()).map(|c| {
        json!({
            "point": format_rational(&c.point),
            "value": format_rational(&c.value),
            "x": to_f64(&c.point),
            "y": to_f64(&c.value),
            "provenance": c.provenance,
        })
    });
    Ok(json!({ "kappa": p.decimal_strings(), "xs": xs, "ys": ys, "negative_point": negative }))
}

/// Runs the epsilon-halving witness search on `C_ell^(r)` (optionally minus an edge).
pub fn certify_json(ell: usize, r: usize, minus_edge: bool) -> Result<Value, Error> {
    check_cycle(ell, r)?;
    let h = if minus_edge { tight_cycle_minus_window(ell, r, 0)? } else { tight_cycle(ell, r)? };
    let w = auto_witness_tight_cycle(&h)?;
    w.certificate.verify()?;
    let cert = &w.certificate;
    Ok(json!({
        "c": format_rational(&w.c),
        "eps": format_rational(&w.eps),
        "halvings": w.halvings,
        "stable": w.stable,
        "t_H": format_rational(&cert.t_h),
        "rhs": format_rational(&cert.rhs),
        "margin": format_rational(&cert.margin),
        "margin_f64": to_f64(&cert.margin),
        "verdict": cert.verdict,
    }))
}

/// Density of the loose triangle under the linear-girth kernel with constant `c`.
pub fn loose_triangle_json(c: &str) -> Result<Value, Error> {
    let c = parse_rational(c)?;
    let h = loose_triangle(3)?;
    let cert = certify_non_sidorenko(&h, &linear_girth_kernel(3, &c)?)?;
    Ok(json!({
        "c": format_rational(&c),
        "t_H": format_rational(&cert.t_h),
        "margin": format_rational(&cert.margin),
        "verdict": cert.verdict,
    }))
}

fn export(v: Result<Value, Error>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn census_curve(ell: usize, r: usize, minus_edge: bool, samples: usize) -> Result<String, JsError> {
    export(census_curve_json(ell, r, minus_edge, samples))
}

#[wasm_bindgen]
pub fn certify(ell: usize, r: usize, minus_edge: bool) -> Result<String, JsError> {
    export(certify_json(ell, r, minus_edge))
}

#[wasm_bindgen]
pub fn loose_triangle_density(c: &str) -> Result<String, JsError> {
    export(loose_triangle_json(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c6_curve_has_negative_point() {
        let v = census_curve_json(6, 3, false, 11).unwrap();
        assert_eq!(v["kappa"], json!(["0", "0", "0", "3", "6", "1"]));
        assert_eq!(v["negative_point"]["point"], "-2/3");
        assert_eq!(v["negative_point"]["value"], "-80/729");
        assert_eq!(v["xs"].as_array().unwrap().len(), 11);
        assert_eq!(v["ys"][10], json!(0.0));
    }

    #[test]
    fn certify_c9_minus_edge() {
        let v = certify_json(9, 3, true).unwrap();
        assert_eq!(v["verdict"], "not_sidorenko");
        assert!(v["margin_f64"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn loose_triangle_margin_is_c_cubed() {
        let v = loose_triangle_json("1/3").unwrap();
        assert_eq!(v["t_H"], "26/27");
        assert_eq!(v["margin"], "1/27");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(census_curve_json(3, 3, false, 10).is_err());
        assert!(census_curve_json(200, 3, false, 10).is_err());
        assert!(loose_triangle_json("x").is_err());
    }
}
