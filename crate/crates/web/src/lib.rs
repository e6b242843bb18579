//! Browser bindings for the `www/` demo page.
//!
//! Every export returns a JSON string; the page parses it and draws. The
//! plain-Rust `*_json` helpers behind the exports are what the tests call.

use fermatlab::primality::{self, ScanWindow};
use fermatlab::zsqrt2::{self, ZSqrt2};
use fermatlab::{Budget, Error, Natural, OpCounter};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Keeps a single click from locking up the tab.
pub const DEMO_MAX_BITS: u64 = 1 << 13;

fn demo_budget() -> Budget {
    Budget::new(DEMO_MAX_BITS).expect("positive")
}

/// `x / F` as a float in `[0, 1)`, from the leading bits only.
fn fraction(x: &Natural, f: &Natural) -> f64 {
    let shift = f.bits().saturating_sub(53);
    let (x, f) = (x >> shift, f >> shift);
    let to_f64 = |v: Natural| v.to_u64_digits().first().copied().unwrap_or(0) as f64;
    to_f64(x) / to_f64(f)
}

#[derive(Debug, Serialize)]
pub struct StreamPoint {
    pub q: u64,
    /// `A_q mod F_n` divided by `F_n`.
    pub fraction: f64,
    pub is_zero: bool,
    pub is_two: bool,
}

#[derive(Debug, Serialize)]
pub struct Stream {
    pub n: u32,
    pub window: ScanWindow,
    pub found_q: Option<u64>,
    pub verdict: String,
    pub squarings: u64,
    pub trace_hash: String,
    pub points: Vec<StreamPoint>,
}

pub fn residue_stream_json(n: u32, full_window: bool) -> Result<String, Error> {
    let mut points = Vec::new();
    let modulus = fermatlab::FermatModulus::new(n, demo_budget())?;
    let scan = primality::paper_scan_with(n, full_window, demo_budget(), |q, r| {
        points.push(StreamPoint {
            q,
            fraction: fraction(r.value(), modulus.value()),
            is_zero: r.is_zero(),
            is_two: r.is_u64(2),
        })
    })?;
    let stream = Stream {
        n,
        window: scan.window,
        found_q: scan.found_q,
        verdict: scan.verdict().label().to_string(),
        squarings: scan.squarings,
        trace_hash: scan.residue_trace_hash.clone(),
        points,
    };
    Ok(serde_json::to_string(&stream).expect("serializable"))
}

#[derive(Debug, Serialize)]
pub struct CrossRow {
    pub n: u32,
    pub pepin: String,
    pub paper: String,
    pub found_q: Option<u64>,
    pub consistent: bool,
    pub squarings_pepin: u64,
    pub squarings_scan: u64,
}

pub fn cross_check_json(from: u32, to: u32) -> Result<String, Error> {
    if from < primality::SCAN_FLOOR || from > to {
        return Err(Error::Domain(format!("need 2 <= from <= to, got {from}..{to}")));
    }
    // No wall-clock timing here: Instant is unavailable on wasm32-unknown-unknown.
    let rows = (from..=to)
        .map(|n| {
            let mut ops = OpCounter::new();
            let pepin = primality::pepin_test_counted(n, demo_budget(), &mut ops)?;
            let scan = primality::paper_scan(n, false, demo_budget())?;
            let paper = scan.verdict();
            Ok(CrossRow {
                n,
                pepin: pepin.label().to_string(),
                paper: paper.label().to_string(),
                found_q: scan.found_q,
                consistent: primality::verdicts_consistent(&pepin, &paper),
                squarings_pepin: ops.squarings(),
                squarings_scan: scan.squarings,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(serde_json::to_string(&rows).expect("serializable"))
}

#[derive(Debug, Serialize)]
pub struct UnitPower {
    pub k: u64,
    pub p: u64,
    /// `u^k mod p` as `[a, b]` for `a + b sqrt 2`.
    pub power: [String; 2],
    pub u_mod_p: [String; 2],
    pub frobenius: bool,
    /// `u^j mod p` for `j = 0..=min(k, 64)`, for plotting the orbit.
    pub orbit: Vec<[u64; 2]>,
}

fn pair(x: &ZSqrt2) -> [String; 2] {
    [x.a.to_string(), x.b.to_string()]
}

pub fn unit_power_json(k: u64, p: u64) -> Result<String, Error> {
    let pn = Natural::from(p);
    let u = zsqrt2::unit_u();
    let power = zsqrt2::pow_mod_p(&u, &Natural::from(k), &pn)?;
    let mut orbit = Vec::new();
    let mut acc = ZSqrt2::one().reduce(&pn);
    for _ in 0..=k.min(64) {
        let comp = |v: &num_bigint::BigInt| v.to_u64_digits().1.first().copied().unwrap_or(0);
        orbit.push([comp(&acc.a), comp(&acc.b)]);
        acc = (&acc * &u).reduce(&pn);
    }
    let out = UnitPower {
        k,
        p,
        power: pair(&power),
        u_mod_p: pair(&u.reduce(&pn)),
        frobenius: zsqrt2::frobenius_check(&pn)?,
        orbit,
    };
    Ok(serde_json::to_string(&out).expect("serializable"))
}

fn js_err(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Residues `A_q mod F_n` along the scan, normalized to `[0, 1)`.
#[wasm_bindgen(js_name = residueStream)]
pub fn residue_stream(n: u32, full_window: bool) -> Result<String, JsValue> {
    residue_stream_json(n, full_window).map_err(js_err)
}

#[wasm_bindgen(js_name = crossCheck)]
pub fn cross_check(from: u32, to: u32) -> Result<String, JsValue> {
    cross_check_json(from, to).map_err(js_err)
}

#[wasm_bindgen(js_name = unitPower)]
pub fn unit_power(k: u64, p: u64) -> Result<String, JsValue> {
    unit_power_json(k, p).map_err(js_err)
}
