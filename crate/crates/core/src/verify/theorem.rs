//! Certificates that no degree-4 real reflection arrangement contains the
//! isotropy arrangement of the realified `G(m,1,2)`.
//!
//! Three parts:
//! 1. direct non-containment against every catalog group in standard
//!    position, each with a witness plane of `A^G`;
//! 2. for `m >= m0_planes`, a counting argument: `A^G` has `m + 2` planes,
//!    more than any arrangement of a group with an irreducible factor of
//!    degree 3 or 4, in any orthogonal position;
//! 3. for groups whose factors have degree at most 2, in any position: the
//!    orthogonal-splitting dichotomy puts every plane of `A^W` in `V1`, `V2`
//!    or through lines of both, while a plane meeting both coordinate planes
//!    meets at most two of the planes `{y = ζ^j x}` (at most one for odd `m`).
//!    With pairwise trivial intersections this rules out containment once
//!    that bound is below `m`.

use super::Instant;
use std::collections::HashSet;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{
    basis_strings, catalog_arrangement, compute_threshold, plane_equation, plane_suite, realified_gm12, Verdict,
    VerificationReport,
};
use crate::arrangements::{isotropy_arrangement, structural_dichotomy_check, Arrangement, ZetaPlanes};
use crate::cyclo::CycNum;
use crate::groups::{catalog_group, enumerate_degree4_catalog, CatalogEntry};
use crate::linalg::{interval_det, interval_vec, CInterval, Subspace};
use crate::{Error, Result};

/// Above this `m` the isotropy arrangement is not recomputed by closure; its
/// planes are taken from the closed form with per-plane certificates.
pub const EXACT_M_LIMIT: u32 = 32;

/// Samples used for the plane statistics inside the theorem check.
const THEOREM_PLANE_SAMPLES: usize = 200;

/// The candidate planes of `A^G` in output order.
#[derive(Clone, Copy, Debug)]
enum Candidate {
    XZero,
    YZero,
    Graph(u32),
}

impl Candidate {
    fn all(m: u32) -> impl Iterator<Item = Candidate> {
        [Candidate::XZero, Candidate::YZero]
            .into_iter()
            .chain((0..m).map(Candidate::Graph))
    }

    fn equation(self) -> String {
        match self {
            Candidate::XZero => "x=0".into(),
            Candidate::YZero => "y=0".into(),
            Candidate::Graph(j) => format!("y=zeta^{j} x"),
        }
    }

    /// An element of `G(m,1,2)` whose fixed space is this plane.
    fn fixed_by(self) -> String {
        match self {
            Candidate::XZero => "(x,y) -> (zeta x, y)".into(),
            Candidate::YZero => "(x,y) -> (x, zeta y)".into(),
            Candidate::Graph(j) => format!("(x,y) -> (zeta^-{j} y, zeta^{j} x)"),
        }
    }

    fn plane(self, z: &ZetaPlanes) -> Subspace {
        match self {
            Candidate::XZero => z.x_zero(),
            Candidate::YZero => z.y_zero(),
            Candidate::Graph(j) => z.plane(j),
        }
    }
}

/// Exact check, in complex coordinates, that the plane built for `{y = ζ^j x}`
/// is the fixed space of `g_j : (x,y) ↦ (ζ^-j y, ζ^j x)`: its real basis is
/// the realification of `(1, ζ^j)` and `i(1, ζ^j)`, `g_j` fixes `(1, ζ^j)`,
/// and `g_j - I` has the nonzero entry `-1`, so its fixed space is a complex
/// line.
fn graph_plane_certified(z: &ZetaPlanes, j: u32) -> bool {
    let l = z.conductor();
    let step = (l / z.m()) as i64;
    let zj = CycNum::zeta_power(l, j as i64 * step);
    let p = z.plane(j);
    let b = p.basis();
    let (c, s) = (&b[0][2], &b[0][3]);
    let o = CycNum::one(l);
    let zero = CycNum::zero(l);
    let realified =
        b[0][0] == o && b[0][1] == zero && b[1][0] == zero && b[1][1] == o && b[1][2] == -s && b[1][3] == *c;
    let value = (c + &s.mul_zeta_power((l / 4) as i64)) == zj;
    let fixed = zj.mul_zeta_power(-(j as i64) * step).is_one();
    realified && value && fixed
}

/// Coordinate planes are fixed spaces of `diag(ζ,1)` and `diag(1,ζ)`, which
/// differ from the identity exactly when `m >= 2`.
fn coordinate_plane_certified(m: u32) -> bool {
    m >= 2
}

fn certified(z: &ZetaPlanes, c: Candidate) -> bool {
    match c {
        Candidate::Graph(j) => graph_plane_certified(z, j),
        _ => coordinate_plane_certified(z.m()),
    }
}

/// Pairwise intersections of the given planes are `{0}`: certified by an
/// interval determinant of the stacked bases, exactly otherwise.
fn pairwise_trivial(planes: &[Subspace]) -> Result<bool> {
    let ivs: Vec<Vec<Vec<CInterval>>> = planes
        .par_iter()
        .map(|p| p.basis().iter().map(|v| interval_vec(v)).collect())
        .collect();
    let bad: Vec<Result<bool>> = (0..planes.len())
        .into_par_iter()
        .map(|i| {
            for k in 0..i {
                let stacked: Vec<Vec<CInterval>> = ivs[i].iter().chain(&ivs[k]).cloned().collect();
                if interval_det(&stacked).excludes_zero() {
                    continue;
                }
                if !planes[i].intersect(&planes[k])?.is_zero() {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect();
    for b in bad {
        if b? {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Direct {
    ok: bool,
    entries: Vec<Value>,
}

fn direct_part(m: u32, catalog: &[CatalogEntry], ag: Option<&Arrangement>, z: &ZetaPlanes) -> Result<Direct> {
    let mut entries = Vec::new();
    let mut ok = true;
    for e in catalog {
        let aw = catalog_arrangement(&e.label)?;
        let witness = match ag {
            Some(ag) => {
                let mut members: Vec<(usize, &Subspace)> = ag.subspaces.iter().enumerate().collect();
                members.sort_by_key(|(_, s)| if s.dim() == 2 { 0 } else { 1 });
                members.into_iter().find(|(_, s)| !aw.contains_member(s)).map(|(i, s)| {
                    json!({
                        "equation": plane_equation(z, s),
                        "basis": basis_strings(s),
                        "provenance": ag.provenance[i],
                    })
                })
            }
            None => Candidate::all(m).find(|c| !aw.contains_member(&c.plane(z))).map(|c| {
                json!({
                    "equation": c.equation(),
                    "fixed_by": c.fixed_by(),
                    "membership_certified": certified(z, c),
                })
            }),
        };
        let contained = witness.is_none();
        let certified_witness = witness
            .as_ref()
            .is_none_or(|w| w.get("membership_certified").is_none_or(|v| v == &json!(true)));
        ok &= !contained && certified_witness;
        entries.push(json!({
            "group": e.label.to_string(),
            "arrangement_size": aw.len(),
            "planes": aw.count_dim(2),
            "contained": contained,
            "witness": witness,
        }));
    }
    Ok(Direct { ok, entries })
}

/// Verifies non-containment for `G(m,1,2)` against the degree-4 catalog with
/// dihedral factors up to `k_max`.
pub fn verify_theorem(m: u32, k_max: u32) -> Result<VerificationReport> {
    if m < 2 {
        return Err(Error::InvalidParameters("theorem check needs m >= 2".into()));
    }
    if k_max < 2 {
        return Err(Error::InvalidParameters("k_max must be at least 2".into()));
    }
    let t = Instant::now();
    let z = ZetaPlanes::shared(m);
    let catalog = enumerate_degree4_catalog(k_max);
    let exact = m <= EXACT_M_LIMIT;
    let ag = if exact {
        Some(isotropy_arrangement(&realified_gm12(m)?))
    } else {
        None
    };
    let planes = z.all_planes();

    // A^G itself: the computed arrangement matches the closed form, or each
    // closed-form plane carries a fixed-space certificate.
    let ag_ok = match &ag {
        Some(a) => {
            a.count_dim(2) == planes.len()
                && planes.iter().all(|p| a.contains_member(p))
                && a.subspaces.iter().all(|s| s.dim() == 2 || s.dim() == 0)
        }
        None => {
            let graphs: Vec<bool> = (0..m).into_par_iter().map(|j| graph_plane_certified(&z, j)).collect();
            graphs.into_iter().all(|b| b) && coordinate_plane_certified(m)
        }
    };
    let distinct = planes.iter().collect::<HashSet<_>>().len() == planes.len();
    let trivial = pairwise_trivial(&planes)?;

    let direct = direct_part(m, &catalog, ag.as_ref(), &z)?;

    let th = compute_threshold()?;
    let applicable = m >= th.m0_planes;
    let counting_ok = ag_ok && distinct && m as usize + 2 > th.max_planes_big_factor;
    let counting = if applicable {
        json!({
            "applicable": true,
            "holds": counting_ok,
            "ag_planes": m + 2,
            "max_planes_big_factor": th.max_planes_big_factor,
            "m0_planes": th.m0_planes,
            "argument": "the number of planes of a reflection arrangement is invariant under orthogonal change of coordinates",
        })
    } else {
        json!({
            "applicable": false,
            "m0_planes": th.m0_planes,
            "reason": "m < m0_planes; big-factor groups are checked in standard position only",
        })
    };

    let mut dichotomy = Vec::new();
    let mut dichotomy_ok = true;
    for e in catalog.iter().filter(|e| !e.big_factor) {
        let rep = structural_dichotomy_check(&*catalog_group(&e.label)?)?;
        dichotomy_ok &= rep.holds;
        dichotomy.push(json!({
            "group": e.label.to_string(),
            "holds": rep.holds,
            "v1": rep.v1,
            "v2": rep.v2,
            "meets_both": rep.meets_both,
        }));
    }
    let suite = plane_suite(m, THEOREM_PLANE_SAMPLES, 0)?;
    let observed = suite.max_count.max(suite.deliberate_count);
    let bound = if m.is_multiple_of(2) { 2 } else { 1 };
    let corollary_ok = observed < m as usize && bound < m as usize;
    let structural_ok = dichotomy_ok && trivial && distinct && ag_ok && corollary_ok;
    let structural = json!({
        "holds": structural_ok,
        "dichotomy": dichotomy,
        "pairwise_trivial": trivial,
        "graph_plane_bound": bound,
        "sampled_planes": suite.samples,
        "sampled_max_count": suite.max_count,
        "deliberate_count": suite.deliberate_count,
        "corollary": format!("a plane meeting {{x=0}} and {{y=0}} meets at most {bound} of the {m} planes y=zeta^j x"),
        "corollary_holds": corollary_ok,
    });

    let verdict = Verdict::from_bool(direct.ok && structural_ok && (!applicable || counting_ok));
    let cert = json!({
        "ag": {
            "planes": planes.len(),
            "distinct": distinct,
            "computed_by_closure": exact,
            "certified": ag_ok,
        },
        "direct": { "holds": direct.ok, "groups": direct.entries },
        "counting": counting,
        "structural": structural,
    });
    let mut r = VerificationReport::new("theorem", json!({ "m": m, "k_max": k_max }), verdict, cert, t);
    if !applicable {
        r = r.note(format!(
            "open: for m < {} big-factor groups in non-standard position are not excluded by this check",
            th.m0_planes
        ));
    }
    let containing: Vec<&str> = direct
        .entries
        .iter()
        .filter(|e| e["contained"] == json!(true))
        .filter_map(|e| e["group"].as_str())
        .collect();
    if !containing.is_empty() {
        r = r.note(format!(
            "A^G is contained in the standard-position arrangement of {}",
            containing.join(", ")
        ));
    }
    if bound >= m as usize {
        r = r.note(
            "m = 2: the plane through e1 and e3 meets all four planes of A^G; the structural branch does not apply",
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_planes_are_fixed_spaces() {
        for m in [2, 3, 8, 45] {
            let z = ZetaPlanes::new(m);
            assert!((0..m).all(|j| graph_plane_certified(&z, j)));
        }
    }

    #[test]
    fn small_theorem_runs() {
        let r = verify_theorem(3, 4).unwrap();
        assert!(r.passed(), "{}", serde_json::to_string_pretty(&r.certificate).unwrap());
        assert_eq!(r.certificate["counting"]["applicable"], false);
        let r2 = verify_theorem(2, 4).unwrap();
        assert!(!r2.passed());
        assert_eq!(r2.certificate["structural"]["corollary_holds"], false);
    }
}
