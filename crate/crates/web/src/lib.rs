//! Browser bindings. Every function returns a JSON string; failures are
//! reported as `{"error": "..."}` so the page needs no exception handling.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use rotarr::arrangements::{phase_ratio, PhaseValue, ZetaPlanes};
use rotarr::cyclo::poly::lcm;
use rotarr::verify;
use rotarr::{CycNum, Rational, Subspace};

/// Largest `m` accepted from the page; closure of `G(m,1,2)` has `2m²` elements.
pub const MAX_M: u32 = 24;
/// Largest dihedral parameter accepted from the page.
pub const MAX_K: u32 = 12;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn check_range(name: &str, v: u32, lo: u32, hi: u32) -> Result<(), String> {
    if (lo..=hi).contains(&v) {
        Ok(())
    } else {
        Err(format!("{name} must be between {lo} and {hi}"))
    }
}

/// Isotropy arrangement of `G(m,1,2)` against the closed-form planes.
#[wasm_bindgen]
pub fn lemma_ag(m: u32) -> String {
    respond((|| {
        check_range("m", m, 1, MAX_M)?;
        let r = verify::verify_lemma_ag(m).map_err(|e| e.to_string())?;
        serde_json::to_value(&r).map_err(|e| e.to_string())
    })())
}

/// Orthogonal-splitting dichotomy for `I2(p) x I2(q)`.
#[wasm_bindgen]
pub fn dichotomy(p: u32, q: u32) -> String {
    respond((|| {
        check_range("p", p, 2, MAX_K)?;
        check_range("q", q, 2, MAX_K)?;
        let r = verify::verify_dichotomy(p, q).map_err(|e| e.to_string())?;
        serde_json::to_value(&r).map_err(|e| e.to_string())
    })())
}

fn pair(s: &str) -> Result<(Rational, Rational), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected two rationals separated by a comma, got {s:?}"));
    }
    let r = |t: &str| t.parse::<Rational>().map_err(|e| e.to_string());
    Ok((r(parts[0])?, r(parts[1])?))
}

/// The plane spanned by `v = (x = a + bi, y = 0)` and `w = (x = 0, y = p + qi)`,
/// given as `"a,b"` and `"p,q"`: which planes `{y = ζ^j x}` it meets, and
/// the phase of `y/x` along it.
#[wasm_bindgen]
pub fn plane_meet(m: u32, v: &str, w: &str) -> String {
    respond(plane_meet_inner(m, v, w))
}

fn plane_meet_inner(m: u32, v: &str, w: &str) -> Result<Value, String> {
    check_range("m", m, 2, 4 * MAX_M)?;
    let ((a, b), (p, q)) = (pair(v)?, pair(w)?);
    if (a.is_zero() && b.is_zero()) || (p.is_zero() && q.is_zero()) {
        return Err("v and w must be nonzero".into());
    }
    let c = |r: &Rational| CycNum::from_rational(4, r.clone());
    let z = || CycNum::zero(4);
    let v = vec![c(&a), c(&b), z(), z()];
    let w = vec![z(), z(), c(&p), c(&q)];
    let sum: Vec<CycNum> = v.iter().zip(&w).map(|(x, y)| x + y).collect();
    let plane = Subspace::from_spanning(4, 4, vec![v, w]).map_err(|e| e.to_string())?;
    let planes = ZetaPlanes::shared(m);
    let big = plane.embed(lcm(4, m)).map_err(|e| e.to_string())?;
    let mut met = Vec::new();
    for j in 0..m {
        if big.meets_nontrivially(&planes.plane(j)).map_err(|e| e.to_string())? {
            met.push(format!("y=zeta^{j} x"));
        }
    }
    let phase = match phase_ratio(&sum).map_err(|e| e.to_string())? {
        PhaseValue::Defined { ratio, .. } => json!({ "ratio": ratio.to_string(), "degrees": degrees(&ratio) }),
        PhaseValue::Undefined => Value::Null,
    };
    Ok(json!({
        "m": m,
        "plane": plane.basis().iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "count": met.len(),
        "met": met,
        "bound": if m.is_multiple_of(2) { 2 } else { 1 },
        "phase": phase,
    }))
}

/// Argument of `z` in degrees, for display only.
fn degrees(z: &CycNum) -> f64 {
    let (re, im) = (z.re_interval().mid(), z.im_interval().mid());
    im.atan2(re).to_degrees()
}
