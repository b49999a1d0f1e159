//! Subspace arrangements: isotropy arrangements of finite groups, reflection
//! arrangements, and the plane geometry of the rotation groups `G(m,1,2)`.

mod planes;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::poly::lcm;
use crate::groups::{ClassTag, MatrixGroup};
use crate::linalg::{interval_det, interval_dot, interval_vec, CInterval, Subspace};
use crate::{Error, Result};

pub use planes::{
    phase_ratio, plane_meet_count, same_phase, sample_coordinate_plane, structural_dichotomy_check, DichotomyReport,
    PhaseValue, PlaneClass, PlaneVerdict, ZetaPlanes,
};

/// Where a member came from: element indices whose fixed spaces intersect
/// to it, and for isotropy arrangements the order of its pointwise
/// stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub elements: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stabilizer_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub ambient: usize,
    pub subspaces: Vec<Subspace>,
    pub provenance: Vec<Provenance>,
}

impl Arrangement {
    pub fn empty(ambient: usize) -> Self {
        Arrangement {
            ambient,
            subspaces: Vec::new(),
            provenance: Vec::new(),
        }
    }

    /// Builds an arrangement from members in any order; output is sorted by
    /// dimension, then canonical basis.
    pub fn from_members(ambient: usize, mut members: Vec<(Subspace, Provenance)>) -> Self {
        members.sort_by(|a, b| a.0.output_cmp(&b.0));
        members.dedup_by(|a, b| a.0 == b.0);
        let (subspaces, provenance) = members.into_iter().unzip();
        Arrangement {
            ambient,
            subspaces,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = &Subspace> {
        self.subspaces.iter().filter(move |s| s.dim() == d)
    }

    pub fn count_dim(&self, d: usize) -> usize {
        self.of_dim(d).count()
    }

    /// Number of members of each dimension `0..=ambient`.
    pub fn strata(&self) -> Vec<usize> {
        (0..=self.ambient).map(|d| self.count_dim(d)).collect()
    }

    /// Membership up to field embedding.
    pub fn contains_member(&self, u: &Subspace) -> bool {
        self.subspaces
            .iter()
            .any(|s| s.dim() == u.dim() && s.pivots() == u.pivots() && s.same_set(u))
    }

    /// Set equality up to field embedding.
    pub fn same_members(&self, other: &Arrangement) -> bool {
        self.ambient == other.ambient
            && self.len() == other.len()
            && arrangement_contains(self, other).map(|c| c.contained).unwrap_or(false)
    }
}

/// A subspace with enclosures of its basis and annihilator, used to settle
/// most containment and independence questions without exact arithmetic.
struct Node {
    space: Subspace,
    basis_iv: Vec<Vec<CInterval>>,
    ann_iv: Vec<Vec<CInterval>>,
    witness: Vec<usize>,
}

impl Node {
    fn new(space: Subspace, witness: Vec<usize>) -> Self {
        let basis_iv = space.basis().iter().map(|v| interval_vec(v)).collect();
        let ann_iv = space.annihilator_rows().iter().map(|v| interval_vec(v)).collect();
        Node {
            space,
            basis_iv,
            ann_iv,
            witness,
        }
    }

    fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `self ⊆ big`.
    fn within(&self, big: &Node) -> bool {
        if self.dim() > big.dim() {
            return false;
        }
        let separated = big
            .ann_iv
            .iter()
            .any(|a| self.basis_iv.iter().any(|b| interval_dot(a, b).excludes_zero()));
        !separated && big.space.contains(&self.space).expect("same ambient")
    }

    fn meet(&self, other: &Node) -> Subspace {
        let (small, big) = if self.dim() <= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        if small.within(big) {
            return small.space.clone();
        }
        let n = self.space.ambient();
        let zero = || Subspace::zero(n, self.space.conductor());
        if small.dim() <= 1 {
            return zero();
        }
        if small.dim() + big.dim() == n {
            let stacked: Vec<Vec<CInterval>> = small.basis_iv.iter().chain(&big.basis_iv).cloned().collect();
            if interval_det(&stacked).excludes_zero() {
                return zero();
            }
        }
        self.space.intersect(&other.space).expect("same ambient")
    }
}

/// Closure of `seeds` under pairwise intersection, iterated to a fixed point
/// semi-naively: each round intersects only pairs involving a member found
/// in the previous round. Rounds are computed in parallel and merged in
/// index order, so the result does not depend on the thread count.
fn intersection_closure(seeds: Vec<(Subspace, Vec<usize>)>) -> Vec<Node> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<Subspace, usize> = HashMap::new();
    for (s, w) in seeds {
        if !index.contains_key(&s) {
            index.insert(s.clone(), nodes.len());
            nodes.push(Node::new(s, w));
        }
    }
    let mut start = 0;
    while start < nodes.len() {
        let end = nodes.len();
        let found: Vec<Vec<(Subspace, usize, usize)>> = (start..end)
            .into_par_iter()
            .map(|i| {
                (0..i)
                    .filter_map(|j| {
                        let m = nodes[i].meet(&nodes[j]);
                        (!index.contains_key(&m)).then_some((m, i, j))
                    })
                    .collect()
            })
            .collect();
        for (m, i, j) in found.into_iter().flatten() {
            if index.contains_key(&m) {
                continue;
            }
            let mut w = nodes[i].witness.clone();
            w.extend_from_slice(&nodes[j].witness);
            w.sort_unstable();
            w.dedup();
            index.insert(m.clone(), nodes.len());
            nodes.push(Node::new(m, w));
        }
        start = end;
    }
    nodes
}

/// Distinct fixed spaces other than the whole space, in element order, each
/// with the elements that have it.
fn fixed_space_classes(g: &MatrixGroup, indices: &[usize]) -> Vec<(Subspace, Vec<usize>)> {
    let mut classes: Vec<(Subspace, Vec<usize>)> = Vec::new();
    let mut pos: HashMap<Subspace, usize> = HashMap::new();
    let spaces: Vec<Subspace> = indices.par_iter().map(|&i| g.fixed_space_of(i)).collect();
    for (&i, f) in indices.iter().zip(spaces) {
        if f.is_full() {
            continue;
        }
        match pos.get(&f) {
            Some(&k) => classes[k].1.push(i),
            None => {
                pos.insert(f.clone(), classes.len());
                classes.push((f, vec![i]));
            }
        }
    }
    classes
}

/// Intersection of the fixed spaces of the given elements; the identity (or
/// the empty subset) yields the whole space.
pub fn fixed_space_of_subset(g: &MatrixGroup, subset: &[usize]) -> Result<Subspace> {
    let mut u = Subspace::full(g.ambient(), g.conductor());
    for &i in subset {
        if i >= g.order() {
            return Err(Error::InvalidParameters(format!("element index {i} out of range")));
        }
        u = u.intersect(&g.fixed_space_of(i))?;
    }
    Ok(u)
}

/// Indices of all elements fixing `u` pointwise.
pub fn pointwise_stabilizer(g: &MatrixGroup, u: &Subspace) -> Result<Vec<usize>> {
    if u.ambient() != g.ambient() {
        return Err(Error::Dimension("subspace and group ambient differ".into()));
    }
    let u = u.embed(lcm(u.conductor(), g.conductor()))?;
    let l = u.conductor();
    let hits: Vec<Result<bool>> = g.elements().par_iter().map(|e| u.is_fixed_by(&e.embed(l)?)).collect();
    let mut out = Vec::new();
    for (i, h) in hits.into_iter().enumerate() {
        if h? {
            out.push(i);
        }
    }
    Ok(out)
}

/// The arrangement of fixed spaces of nontrivial isotropy subgroups.
///
/// The fixed spaces `F` of nonidentity elements are closed under
/// intersection; for each lattice member `U` the pointwise stabilizer `H_U`
/// is collected from the fixed-space classes containing `U`, and `V^{H_U}` is
/// reported. Every `U` arises as the intersection of the fixed spaces of its
/// witness elements, all of which lie in `H_U`, so `V^{H_U} ⊆ U`; the reverse
/// inclusion holds by definition of `H_U`. Hence `V^{H_U} = U` and `H_U` is
/// nontrivial, and the arrangement is the lattice itself.
pub fn isotropy_arrangement(g: &MatrixGroup) -> Arrangement {
    let all: Vec<usize> = (0..g.order()).collect();
    g.fixed_spaces();
    let classes = fixed_space_classes(g, &all);
    let k = classes.len();
    let sizes: Vec<usize> = classes.iter().map(|c| c.1.len()).collect();
    let seeds = classes.into_iter().map(|(s, els)| (s, vec![els[0]])).collect();
    let nodes = intersection_closure(seeds);
    let members: Vec<(Subspace, Provenance)> = nodes
        .par_iter()
        .map(|u| {
            let stabilizer = 1 + (0..k).filter(|&c| u.within(&nodes[c])).map(|c| sizes[c]).sum::<usize>();
            let prov = Provenance {
                elements: u.witness.clone(),
                stabilizer_order: Some(stabilizer),
            };
            (u.space.clone(), prov)
        })
        .collect();
    debug_assert!(members.iter().all(|(_, p)| p.stabilizer_order > Some(1)));
    Arrangement::from_members(g.ambient(), members)
}

/// Reflecting hyperplanes and all their intersections. The trivial group is
/// accepted (it is generated by the empty set of reflections) and yields the
/// empty arrangement.
pub fn reflection_arrangement(w: &MatrixGroup) -> Result<Arrangement> {
    if w.order() > 1 && !w.generated_by_class(ClassTag::Reflection).generated {
        return Err(Error::NotAReflectionGroup);
    }
    let classes = fixed_space_classes(w, &w.reflection_indices());
    let seeds = classes.into_iter().map(|(s, els)| (s, vec![els[0]])).collect();
    let members = intersection_closure(seeds)
        .into_iter()
        .map(|n| {
            let prov = Provenance {
                elements: n.witness,
                stabilizer_order: None,
            };
            (n.space, prov)
        })
        .collect();
    Ok(Arrangement::from_members(w.ambient(), members))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Containment {
    pub contained: bool,
    /// The first member of the smaller arrangement missing from the larger.
    pub missing: Option<Subspace>,
}

/// Whether every member of `small` is a member of `big`. Arrangements over
/// different cyclotomic fields are compared as sets of real subspaces.
pub fn arrangement_contains(big: &Arrangement, small: &Arrangement) -> Result<Containment> {
    if big.ambient != small.ambient {
        return Err(Error::Dimension(format!(
            "ambient dimensions {} and {} differ",
            big.ambient, small.ambient
        )));
    }
    let same_field = |u: &Subspace| big.subspaces.first().is_none_or(|b| b.conductor() == u.conductor());
    let exact: std::collections::HashSet<&Subspace> = big.subspaces.iter().collect();
    let missing = small.subspaces.iter().find(|u| {
        if same_field(u) {
            !exact.contains(u)
        } else {
            !big.contains_member(u)
        }
    });
    Ok(Containment {
        contained: missing.is_none(),
        missing: missing.cloned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog_group, gm12_real_generators, CatalogLabel, DEFAULT_CAP};
    use crate::linalg::MatrixF;

    fn gm12(m: u32) -> MatrixGroup {
        MatrixGroup::closure(gm12_real_generators(m).unwrap(), DEFAULT_CAP).unwrap()
    }

    fn cat(s: &str) -> std::sync::Arc<MatrixGroup> {
        catalog_group(&s.parse::<CatalogLabel>().unwrap()).unwrap()
    }

    #[test]
    fn lemma_ag_small_m() {
        for m in 2..=6 {
            let g = gm12(m);
            let a = isotropy_arrangement(&g);
            assert_eq!(a.strata(), vec![1, 0, m as usize + 2, 0, 0], "m = {m}");
            let expected = ZetaPlanes::new(m).all_planes();
            for p in &expected {
                assert!(a.subspaces.contains(p));
            }
            assert_eq!(a.provenance[0].stabilizer_order, Some(g.order()));
        }
    }

    #[test]
    fn subset_and_stabilizer_examples() {
        let g = gm12(3);
        assert!(fixed_space_of_subset(&g, &[0]).unwrap().is_full());
        let gens: Vec<usize> = g.generators().iter().map(|x| g.index_of(x).unwrap()).collect();
        // diag(ζ,1) and its conjugate diag(1,ζ) by the swap.
        let swap = &g.elements()[gens[1]];
        let d2 = swap.mul(&g.elements()[gens[0]]).unwrap().mul(swap).unwrap();
        let sub = [gens[0], g.index_of(&d2).unwrap()];
        assert!(fixed_space_of_subset(&g, &sub).unwrap().is_zero());
        let all: Vec<usize> = (0..g.order()).collect();
        assert!(fixed_space_of_subset(&g, &all).unwrap().is_zero());
        assert_eq!(pointwise_stabilizer(&g, &Subspace::zero(4, 12)).unwrap().len(), 18);
        assert_eq!(pointwise_stabilizer(&g, &Subspace::full(4, 12)).unwrap(), vec![0]);
        let y_eq_x = ZetaPlanes::new(3).plane(0);
        let stab = pointwise_stabilizer(&g, &y_eq_x).unwrap();
        assert_eq!(stab, vec![0, gens[1]]);
    }

    #[test]
    fn trivial_and_rank_one() {
        assert!(isotropy_arrangement(&MatrixGroup::trivial(4, 1)).is_empty());
        let a1 = cat("A1");
        let arr = isotropy_arrangement(&a1);
        assert_eq!(arr.subspaces, vec![Subspace::zero(1, 1)]);
        assert_eq!(
            reflection_arrangement(&a1).unwrap(),
            Arrangement {
                provenance: vec![Provenance {
                    elements: vec![1],
                    stabilizer_order: None
                }],
                ..arr
            }
        );
    }

    #[test]
    fn reflection_arrangement_examples() {
        let i23 = reflection_arrangement(&cat("I2(3)")).unwrap();
        assert_eq!(i23.strata(), vec![1, 3, 0]);
        let a1_4 = reflection_arrangement(&cat("I2(2)xI2(2)")).unwrap();
        // Four coordinate hyperplanes and every intersection of them.
        assert_eq!(a1_4.strata(), vec![1, 4, 6, 4, 0]);
        assert!(matches!(
            reflection_arrangement(&gm12(3)),
            Err(Error::NotAReflectionGroup)
        ));
    }

    #[test]
    fn oracle_equivalence_small() {
        for s in ["I2(5)", "B3", "A3xA1", "I2(3)xI2(4)", "I2(6)xA1x1", "A1xA1xA1x1"] {
            let g = cat(s);
            assert_eq!(
                isotropy_arrangement(&g).subspaces,
                reflection_arrangement(&g).unwrap().subspaces,
                "{s}"
            );
        }
    }

    #[test]
    fn containment_examples() {
        let a = isotropy_arrangement(&gm12(4));
        assert!(arrangement_contains(&a, &a).unwrap().contained);
        assert!(arrangement_contains(&a, &Arrangement::empty(4)).unwrap().contained);
        let w = reflection_arrangement(&cat("I2(4)xI2(4)")).unwrap();
        let c = arrangement_contains(&w, &a).unwrap();
        assert!(!c.contained);
        let missing = c.missing.unwrap();
        assert_eq!(missing.dim(), 2);
        assert!(a.subspaces.contains(&missing));
        assert!(arrangement_contains(&w, &Arrangement::empty(3)).is_err());
        // Different fields, same geometry.
        let w12 = Arrangement {
            subspaces: w.subspaces.iter().map(|s| s.embed(12).unwrap()).collect(),
            ..w.clone()
        };
        assert!(w12.same_members(&w));
        assert!(!w12.same_members(&a));
    }

    #[test]
    fn m2_arrangement_sits_in_a_permuted_b2_product() {
        // Conjugating I2(4)xI2(4) by the swap of e2 and e3 puts one B2 on
        // (Re x, Re y) and the other on (Im x, Im y).
        let w = cat("I2(4)xI2(4)");
        let l = w.conductor();
        let perm = MatrixF::from_int_rows(l, &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        let gens = w
            .generators()
            .iter()
            .map(|g| perm.mul(g).unwrap().mul(&perm).unwrap())
            .collect();
        let w2 = MatrixGroup::closure(gens, DEFAULT_CAP).unwrap();
        let aw = reflection_arrangement(&w2).unwrap();
        let ag = isotropy_arrangement(&gm12(2));
        assert!(arrangement_contains(&aw, &ag).unwrap().contained);
        for m in [3, 4] {
            assert!(
                !arrangement_contains(&aw, &isotropy_arrangement(&gm12(m)))
                    .unwrap()
                    .contained
            );
        }
    }

    #[test]
    fn json_shape() {
        let a = reflection_arrangement(&cat("A1")).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(
            s,
            r#"{"ambient":1,"subspaces":[{"ambient":1,"conductor":1,"basis":[]}],"provenance":[{"elements":[1]}]}"#
        );
        let back: Arrangement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
