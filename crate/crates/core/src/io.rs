//! JSON and CSV external interfaces.
//!
//! Weight tables arrive as
//! `{"orders":[p,q], "alpha":{"i,j":value, ...}}` with comma-joined group
//! indices as keys; omitted keys mean zero and the identity key must be
//! absent or zero. An optional `"rho_coeffs"` table with `[re, im]` pairs
//! selects a stationary state. Reports leave as JSON with the same key
//! convention and `"inf"` standing in for infinite rates; entropy curves
//! leave as `t,S` CSV.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::circulant::{CycleWeights, GroupLayout, Spectrum};
use crate::entropy::{ChoiState, EprReport, SeparabilityReport};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::qms::{CycleStructure, CycleTerm, InvariantStateParams, SpecialRepReport, WeightRatios};

/// A parsed input document: the weight table and, when present, the
/// stationary-state coefficients.
#[derive(Debug, Clone)]
pub struct WeightsDocument {
    pub weights: CycleWeights,
    pub state_params: Option<InvariantStateParams>,
}

fn schema_err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Schema(format!("{path}: {msg}"))
}

fn parse_key(path: &str, key: &str, layout: &GroupLayout) -> Result<usize> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != layout.factors() {
        return Err(schema_err(
            path,
            format!(
                "key \"{key}\" has {} indices, expected {}",
                parts.len(),
                layout.factors()
            ),
        ));
    }
    let mut index = Vec::with_capacity(parts.len());
    for part in parts {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| schema_err(path, format!("key \"{key}\" is not a group index")))?;
        index.push(v);
    }
    layout
        .flatten(&index)
        .map_err(|_| schema_err(path, format!("key \"{key}\" is out of range")))
}

fn index_key(layout: &GroupLayout, flat: usize) -> String {
    layout
        .unflatten(flat)
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Parse a weight-table document from JSON text.
pub fn parse_weights_json(text: &str) -> Result<WeightsDocument> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Schema("top level must be an object".into()))?;

    let orders_value = obj
        .get("orders")
        .ok_or_else(|| schema_err("orders", "missing field"))?;
    let orders: Vec<usize> = orders_value
        .as_array()
        .ok_or_else(|| schema_err("orders", "must be an array of positive integers"))?
        .iter()
        .map(|v| {
            v.as_u64()
                .filter(|&p| p >= 1)
                .map(|p| p as usize)
                .ok_or_else(|| schema_err("orders", "entries must be positive integers"))
        })
        .collect::<Result<_>>()?;
    let layout = GroupLayout::new(&orders)?;

    let alpha_value = obj
        .get("alpha")
        .ok_or_else(|| schema_err("alpha", "missing field"))?;
    let alpha_map = alpha_value
        .as_object()
        .ok_or_else(|| schema_err("alpha", "must be an object keyed by \"i,j\""))?;
    let mut alpha = vec![0.0; layout.dim()];
    for (key, v) in alpha_map {
        let path = format!("alpha.\"{key}\"");
        let flat = parse_key(&path, key, &layout)?;
        let x = v
            .as_f64()
            .ok_or_else(|| schema_err(&path, "value must be a number"))?;
        alpha[flat] = x;
    }
    let weights = CycleWeights::new(&orders, alpha)
        .map_err(|e| Error::Schema(format!("alpha: {e}")))?;

    let state_params = match obj.get("rho_coeffs") {
        None => None,
        Some(value) => {
            let map = value
                .as_object()
                .ok_or_else(|| schema_err("rho_coeffs", "must be an object keyed by \"i,j\""))?;
            let mut coeffs = vec![Complex64::new(0.0, 0.0); layout.dim()];
            coeffs[0] = Complex64::new(1.0 / layout.dim() as f64, 0.0);
            for (key, v) in map {
                let path = format!("rho_coeffs.\"{key}\"");
                let flat = parse_key(&path, key, &layout)?;
                let pair = v
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| schema_err(&path, "value must be a [re, im] pair"))?;
                let re = pair[0]
                    .as_f64()
                    .ok_or_else(|| schema_err(&path, "re must be a number"))?;
                let im = pair[1]
                    .as_f64()
                    .ok_or_else(|| schema_err(&path, "im must be a number"))?;
                let z = Complex64::new(re, im);
                if flat == 0 {
                    let expected = 1.0 / layout.dim() as f64;
                    if (z - Complex64::new(expected, 0.0)).norm() > 1e-12 {
                        return Err(schema_err(
                            &path,
                            format!("identity coefficient must be 1/{} when present", layout.dim()),
                        ));
                    }
                } else {
                    coeffs[flat] = z;
                }
            }
            Some(
                InvariantStateParams::new(&orders, coeffs)
                    .map_err(|e| Error::Schema(format!("rho_coeffs: {e}")))?,
            )
        }
    };

    Ok(WeightsDocument {
        weights,
        state_params,
    })
}

/// Serialize a weight table (and optional state coefficients) back to the
/// input schema; zero weights are omitted.
pub fn weights_to_json(
    weights: &CycleWeights,
    params: Option<&InvariantStateParams>,
) -> Result<Value> {
    let layout = GroupLayout::new(weights.orders())?;
    let mut alpha = Map::new();
    for (flat, &v) in weights.alpha().iter().enumerate() {
        if v != 0.0 {
            alpha.insert(index_key(&layout, flat), json!(v));
        }
    }
    let mut out = Map::new();
    out.insert("orders".into(), json!(weights.orders()));
    out.insert("alpha".into(), Value::Object(alpha));
    if let Some(p) = params {
        let mut coeffs = Map::new();
        for (flat, z) in p.coeffs().iter().enumerate() {
            if flat != 0 && z.norm_sqr() != 0.0 {
                coeffs.insert(index_key(&layout, flat), json!([z.re, z.im]));
            }
        }
        out.insert("rho_coeffs".into(), Value::Object(coeffs));
    }
    Ok(Value::Object(out))
}

/// A nonnegative rate as JSON: a number, or `"inf"`.
fn rate_value(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!("inf")
    }
}

fn keyed_real_table(layout: &GroupLayout, values: &[f64]) -> Value {
    let mut map = BTreeMap::new();
    for (flat, &v) in values.iter().enumerate() {
        map.insert(index_key(layout, flat), rate_value(v));
    }
    json!(map)
}

pub fn spectrum_json(spectrum: &Spectrum) -> Result<Value> {
    let layout = GroupLayout::new(spectrum.orders())?;
    let mut map = BTreeMap::new();
    for (flat, z) in spectrum.lambda().iter().enumerate() {
        map.insert(index_key(&layout, flat), json!([z.re, z.im]));
    }
    Ok(json!({
        "orders": spectrum.orders(),
        "lambda": map,
    }))
}

pub fn evolve_json(
    orders: &[usize],
    t: f64,
    matrix: &ComplexMatrix,
    oracle_residual: f64,
) -> Value {
    let rows: Vec<Vec<f64>> = (0..matrix.rows())
        .map(|i| (0..matrix.cols()).map(|j| matrix.get(i, j).re).collect())
        .collect();
    json!({
        "orders": orders,
        "t": t,
        "matrix": rows,
        "oracle_residual": oracle_residual,
    })
}

pub fn choi_json(
    orders: &[usize],
    t: f64,
    forward: &ChoiState,
    backward: &ChoiState,
) -> Result<Value> {
    let layout = GroupLayout::new(orders)?;
    Ok(json!({
        "orders": orders,
        "t": t,
        "forward_eigenvalues": keyed_real_table(&layout, forward.eigen_values()),
        "backward_eigenvalues": keyed_real_table(&layout, backward.eigen_values()),
        "trace_forward": forward.state().matrix().trace().re,
        "trace_backward": backward.state().matrix().trace().re,
        "residual_forward": forward.cross_residual(),
        "residual_backward": backward.cross_residual(),
    }))
}

pub fn epr_report_json(report: &EprReport) -> Result<Value> {
    let layout = GroupLayout::new(&report.orders)?;
    let numerical = match report.qepr_numerical.value {
        Some(v) => json!(v),
        None => json!("divergent"),
    };
    let raw: Vec<Value> = report
        .qepr_numerical
        .raw
        .iter()
        .map(|&(t, v)| json!([t, v]))
        .collect();
    Ok(json!({
        "qepr_closed": rate_value(report.qepr_closed),
        "qepr_numerical": numerical,
        "qepr_numerical_raw": raw,
        "classical_epr": rate_value(report.classical_epr),
        "detailed_balance": report.detailed_balance,
        "terms": keyed_real_table(&layout, &report.terms),
    }))
}

pub fn check_db_json(
    orders: &[usize],
    detailed_balance: bool,
    max_asymmetry: f64,
    ratios: &WeightRatios,
) -> Result<Value> {
    let layout = GroupLayout::new(orders)?;
    let mut map = BTreeMap::new();
    for (flat, &q) in ratios.ratios().iter().enumerate() {
        if flat != 0 {
            map.insert(index_key(&layout, flat), rate_value(q));
        }
    }
    Ok(json!({
        "detailed_balance": detailed_balance,
        "max_asymmetry": max_asymmetry,
        "ratios": map,
        "identity_residual": ratios.residual(),
    }))
}

pub fn invariant_state_json(
    params: &InvariantStateParams,
    residual_forward: f64,
    residual_backward: f64,
) -> Result<Value> {
    let layout = GroupLayout::new(params.orders())?;
    let mut coeffs = BTreeMap::new();
    for (flat, z) in params.coeffs().iter().enumerate() {
        coeffs.insert(index_key(&layout, flat), json!([z.re, z.im]));
    }
    Ok(json!({
        "rho_coeffs": coeffs,
        "fourier_eigenvalues": keyed_real_table(&layout, &params.fourier_eigenvalues()),
        "residual_forward": residual_forward,
        "residual_backward": residual_backward,
    }))
}

pub fn cycles_json(terms: &[CycleTerm], support_generates: bool) -> Value {
    let items: Vec<Value> = terms
        .iter()
        .map(|term| match &term.structure {
            CycleStructure::Maximal(c) => json!({
                "weight": term.weight,
                "cycle": c.vertices(),
            }),
            CycleStructure::Orbits(orbits) => json!({
                "weight": term.weight,
                "orbits": orbits.iter().map(|c| c.vertices()).collect::<Vec<_>>(),
            }),
        })
        .collect();
    json!({
        "terms": items,
        "support_generates": support_generates,
        "reducible_support": !support_generates,
    })
}

pub fn special_rep_json(report: &SpecialRepReport) -> Value {
    json!({
        "trace_residuals": report.trace_residuals,
        "min_singular_value": report.min_singular_value,
        "traces_vanish": report.traces_vanish,
        "independent": report.independent,
    })
}

pub fn separability_json(report: &SeparabilityReport) -> Value {
    json!({
        "alpha_first": report.alpha_first,
        "alpha_second": report.alpha_second,
        "separable": report.separable,
        "marginal_residual_first": report.marginal_residual_first,
        "marginal_residual_second": report.marginal_residual_second,
        "mixture_residual": report.mixture_residual,
        "mixture_terms": report.mixture_terms,
        "product_residual": report.product_residual,
    })
}

/// Entropy curve as `t,S` CSV.
pub fn curve_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("t,S\n");
    for &(t, s) in rows {
        out.push_str(&format!("{t},{s}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_factor_document() {
        let doc = parse_weights_json(r#"{"orders":[3],"alpha":{"1":0.75,"2":0.25}}"#).unwrap();
        assert_eq!(doc.weights.orders(), &[3]);
        assert_eq!(doc.weights.alpha(), &[0.0, 0.75, 0.25]);
        assert!(doc.state_params.is_none());
    }

    #[test]
    fn parses_two_factor_document_with_state() {
        let text = r#"{
            "orders": [2, 2],
            "alpha": {"0,1": 0.5, "1,0": 0.5},
            "rho_coeffs": {"1,0": [0.1, 0.0]}
        }"#;
        let doc = parse_weights_json(text).unwrap();
        assert_eq!(doc.weights.orders(), &[2, 2]);
        let params = doc.state_params.unwrap();
        assert_eq!(params.coeffs()[0], Complex64::new(0.25, 0.0));
        assert_eq!(params.coeffs()[2], Complex64::new(0.1, 0.0));
    }

    #[test]
    fn schema_errors_name_the_key_path() {
        let err = parse_weights_json(r#"{"orders":[3],"alpha":{"5":1.0}}"#).unwrap_err();
        assert!(err.to_string().contains("alpha.\"5\""), "{err}");

        let err = parse_weights_json(r#"{"orders":[3],"alpha":{"1,1":1.0}}"#).unwrap_err();
        assert!(err.to_string().contains("alpha.\"1,1\""), "{err}");

        let err = parse_weights_json(r#"{"orders":[3]}"#).unwrap_err();
        assert!(err.to_string().contains("alpha"), "{err}");

        let err = parse_weights_json(r#"{"orders":[3],"alpha":{"0":0.5,"1":0.5}}"#).unwrap_err();
        assert!(matches!(err, Error::Schema(_)), "{err}");
    }

    #[test]
    fn weight_table_roundtrip() {
        let text = r#"{"orders":[3,2],"alpha":{"0,1":0.25,"1,0":0.5,"2,1":0.25}}"#;
        let doc = parse_weights_json(text).unwrap();
        let value = weights_to_json(&doc.weights, None).unwrap();
        let again = parse_weights_json(&value.to_string()).unwrap();
        assert_eq!(doc.weights, again.weights);
    }

    #[test]
    fn curve_csv_format() {
        let csv = curve_csv(&[(0.0, 0.0), (0.5, 0.25)]);
        assert_eq!(csv, "t,S\n0,0\n0.5,0.25\n");
    }

    #[test]
    fn rate_values_serialize_infinities_as_strings() {
        assert_eq!(rate_value(1.5), json!(1.5));
        assert_eq!(rate_value(f64::INFINITY), json!("inf"));
    }
}
