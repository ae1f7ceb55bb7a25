//! Operators on the truncated momentum basis, from command-line specs.

use anyhow::{anyhow, bail, Context, Result};
use rand_chacha::ChaCha8Rng;
use schwinger::wigner_weyl::{commutant_closed_form, FourierCoeffs, MomentumIndex, MomentumOperator};
use schwinger::{CMatrix, Complex64, HalfInt};
use serde_json::Value;

pub const HELP: &str = "identity | random | random-hermitian | commutant | rank-one:J,M,N | @FILE \
(FILE: {\"two_j_max\": int, \"matrix\": [[[re, im], ...], ...]})";

pub fn parse(spec: &str, j_max: HalfInt, rng: &mut ChaCha8Rng) -> Result<MomentumOperator> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        return from_json(&serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?);
    }
    if let Some(labels) = spec.strip_prefix("rank-one:") {
        let parts: Vec<HalfInt> = labels.split(',').map(str::parse).collect::<schwinger::Result<_>>()?;
        let [j, m, n] = parts[..] else { bail!("rank-one needs J,M,N") };
        return Ok(MomentumOperator::rank_one(j_max, MomentumIndex::new(j, m, n)?)?);
    }
    Ok(match spec {
        "identity" => MomentumOperator::identity(j_max),
        "random" => MomentumOperator::random(j_max, rng),
        "random-hermitian" => MomentumOperator::random_hermitian(j_max, rng),
        "commutant" => commutant_closed_form(&FourierCoeffs::random(j_max, rng)),
        _ => bail!("unknown operator {spec:?}; expected {HELP}"),
    })
}

fn from_json(v: &Value) -> Result<MomentumOperator> {
    let t = v["two_j_max"].as_i64().ok_or_else(|| anyhow!("missing integer two_j_max"))?;
    let rows = v["matrix"].as_array().ok_or_else(|| anyhow!("missing matrix"))?;
    let entry = |x: &Value| -> Result<Complex64> {
        match x.as_array().map(|p| (p.len(), p.first().and_then(Value::as_f64), p.get(1).and_then(Value::as_f64))) {
            Some((2, Some(re), Some(im))) => Ok(Complex64::new(re, im)),
            _ => bail!("matrix entries must be [re, im]"),
        }
    };
    let n = rows.len();
    let mut m = CMatrix::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| anyhow!("matrix rows must be arrays"))?;
        if row.len() != n {
            bail!("matrix must be square");
        }
        for (s, x) in row.iter().enumerate() {
            m[(r, s)] = entry(x)?;
        }
    }
    Ok(MomentumOperator::from_matrix(HalfInt::from_twice(t), m)?)
}
