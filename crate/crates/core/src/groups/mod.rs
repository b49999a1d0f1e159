//! Finite matrix groups: closure, element classification, the imprimitive
//! groups `G(m,p,n)`, realification, and the real reflection catalog.

mod catalog;

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::poly::lcm;
use crate::cyclo::CycNum;
use crate::linalg::{MatrixF, Subspace};
use crate::{Error, Result};

pub use catalog::{
    catalog_group, enumerate_degree4_catalog, parse_group_spec, CatalogEntry, CatalogLabel, GroupSpec, Irreducible,
};

pub const DEFAULT_CAP: usize = 20_000;

/// Generators of `G(m,p,n)` as complex `n x n` matrices over `Q(ζ_L)` with
/// `L = lcm(4, m)`, so that [`realify`] applies directly.
///
/// The diagonal part is generated by `diag(ζ^p, 1, ..)` and, for `p > 1`,
/// `diag(ζ, ζ^-1, 1, ..)`; the symmetric group by adjacent transpositions.
/// Identity matrices are dropped.
pub fn gmpn_generators(m: u32, p: u32, n: usize) -> Result<Vec<MatrixF>> {
    if m == 0 || p == 0 || n == 0 {
        return Err(Error::InvalidParameters("m, p and n must be positive".into()));
    }
    if !m.is_multiple_of(p) {
        return Err(Error::InvalidParameters(format!("p = {p} does not divide m = {m}")));
    }
    let l = lcm(4, m);
    let step = (l / m) as i64;
    let diag = |exps: &[i64]| {
        let mut g = MatrixF::identity(n, l);
        for (i, &e) in exps.iter().enumerate() {
            g.set(i, i, CycNum::zeta_power(l, e * step));
        }
        g
    };
    let mut gens = vec![diag(&[p as i64])];
    if p > 1 && n > 1 {
        gens.push(diag(&[1, -1]));
    }
    for i in 0..n.saturating_sub(1) {
        let mut t = MatrixF::zeros(n, n, l);
        for k in 0..n {
            let j = if k == i {
                i + 1
            } else if k == i + 1 {
                i
            } else {
                k
            };
            t.set(k, j, CycNum::one(l));
        }
        gens.push(t);
    }
    gens.retain(|g| !g.is_identity());
    Ok(gens)
}

/// Generators of the realified `G(m,1,2)` acting on `R^4` with coordinates
/// `(Re x, Im x, Re y, Im y)`.
pub fn gm12_real_generators(m: u32) -> Result<Vec<MatrixF>> {
    gmpn_generators(m, 1, 2)?.iter().map(realify).collect()
}

/// Realification: every complex entry `a + bi` becomes the block `[[a, -b], [b, a]]`.
pub fn realify(g: &MatrixF) -> Result<MatrixF> {
    let l = g.conductor();
    if !l.is_multiple_of(4) {
        return Err(Error::NoImaginaryUnit(l));
    }
    let (r, c) = (g.rows(), g.cols());
    let mut out = MatrixF::zeros(2 * r, 2 * c, l);
    for i in 0..r {
        for j in 0..c {
            let (a, b) = g.get(i, j).real_imag_parts()?;
            debug_assert!(a.is_real() && b.is_real());
            out.set(2 * i, 2 * j, a.clone());
            out.set(2 * i, 2 * j + 1, -&b);
            out.set(2 * i + 1, 2 * j, b);
            out.set(2 * i + 1, 2 * j + 1, a);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    Identity,
    Reflection,
    Rotation,
    BireflectionPlus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElementClass {
    pub tag: ClassTag,
    pub fix_codim: usize,
}

impl ElementClass {
    pub fn from_codim(fix_codim: usize) -> Self {
        let tag = match fix_codim {
            0 => ClassTag::Identity,
            1 => ClassTag::Reflection,
            2 => ClassTag::Rotation,
            _ => ClassTag::BireflectionPlus,
        };
        ElementClass { tag, fix_codim }
    }
}

/// Codimension of the 1-eigenspace, i.e. `rank(g - I)`.
pub fn classify(g: &MatrixF) -> Result<ElementClass> {
    Ok(ElementClass::from_codim(g.minus_identity()?.rank()))
}

pub fn fixed_space(g: &MatrixF) -> Result<Subspace> {
    Ok(Subspace::kernel(&g.minus_identity()?))
}

/// Serialized form of a group: generators only; elements are recomputed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: Option<String>,
    pub ambient: usize,
    pub conductor: u32,
    pub generators: Vec<MatrixF>,
}

/// A finite matrix group with its full element list. Elements are kept in
/// breadth-first discovery order, starting with the identity.
pub struct MatrixGroup {
    name: Option<String>,
    ambient: usize,
    conductor: u32,
    generators: Vec<MatrixF>,
    elements: Vec<MatrixF>,
    index: HashMap<MatrixF, usize>,
    fixed: OnceLock<Vec<Subspace>>,
    classes: OnceLock<Vec<ElementClass>>,
}

impl std::fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixGroup")
            .field("name", &self.name)
            .field("ambient", &self.ambient)
            .field("conductor", &self.conductor)
            .field("order", &self.order())
            .finish()
    }
}

impl MatrixGroup {
    pub fn trivial(ambient: usize, conductor: u32) -> Self {
        Self::from_elements(
            None,
            ambient,
            conductor,
            Vec::new(),
            vec![MatrixF::identity(ambient, conductor)],
        )
    }

    fn from_elements(
        name: Option<String>,
        ambient: usize,
        conductor: u32,
        generators: Vec<MatrixF>,
        elements: Vec<MatrixF>,
    ) -> Self {
        let index = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        MatrixGroup {
            name,
            ambient,
            conductor,
            generators,
            elements,
            index,
            fixed: OnceLock::new(),
            classes: OnceLock::new(),
        }
    }

    /// Breadth-first closure of `generators` from the identity. Each layer's
    /// products are computed in parallel and merged in a fixed order, so the
    /// element list does not depend on the thread count.
    pub fn closure(generators: Vec<MatrixF>, cap: usize) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidParameters("closure needs at least one generator".into()))?;
        let (n, l) = (first.rows(), first.conductor());
        Self::closure_in(n, l, generators, cap)
    }

    pub fn closure_in(ambient: usize, conductor: u32, generators: Vec<MatrixF>, cap: usize) -> Result<Self> {
        for g in &generators {
            if !g.is_square() || g.rows() != ambient {
                return Err(Error::Dimension(format!(
                    "generator of shape {}x{} in ambient dimension {ambient}",
                    g.rows(),
                    g.cols()
                )));
            }
            if g.conductor() != conductor {
                return Err(Error::ConductorMismatch(conductor, g.conductor()));
            }
            if g.rank() != ambient {
                return Err(Error::InvalidParameters("generator is not invertible".into()));
            }
        }
        let id = MatrixF::identity(ambient, conductor);
        let mut elements = vec![id.clone()];
        let mut seen: HashSet<MatrixF> = HashSet::from([id]);
        let mut start = 0;
        while start < elements.len() {
            let end = elements.len();
            let layer: Vec<Vec<MatrixF>> = elements[start..end]
                .par_iter()
                .map(|e| generators.iter().map(|g| e.mul(g).expect("shapes checked")).collect())
                .collect();
            for prod in layer.into_iter().flatten() {
                if !seen.contains(&prod) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureCap { cap });
                    }
                    seen.insert(prod.clone());
                    elements.push(prod);
                }
            }
            start = end;
        }
        Ok(Self::from_elements(None, ambient, conductor, generators, elements))
    }

    pub fn from_file(file: GroupFile, cap: usize) -> Result<Self> {
        let g = Self::closure_in(file.ambient, file.conductor, file.generators, cap)?;
        Ok(g.with_name(file.name))
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            name: self.name.clone(),
            ambient: self.ambient,
            conductor: self.conductor,
            generators: self.generators.clone(),
        }
    }

    pub fn with_name(mut self, name: Option<String>) -> Self {
        self.name = name;
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn generators(&self) -> &[MatrixF] {
        &self.generators
    }

    pub fn elements(&self) -> &[MatrixF] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &MatrixF) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn element_set(&self) -> HashSet<&MatrixF> {
        self.elements.iter().collect()
    }

    /// Fixed spaces of all elements, indexed like [`Self::elements`].
    pub fn fixed_spaces(&self) -> &[Subspace] {
        self.fixed.get_or_init(|| {
            self.elements
                .par_iter()
                .map(|g| fixed_space(g).expect("square"))
                .collect()
        })
    }

    /// Fixed space of one element, from the cache when it is populated.
    pub fn fixed_space_of(&self, i: usize) -> Subspace {
        match self.fixed.get() {
            Some(f) => f[i].clone(),
            None => fixed_space(&self.elements[i]).expect("square"),
        }
    }

    pub fn classes(&self) -> &[ElementClass] {
        self.classes.get_or_init(|| match self.fixed.get() {
            Some(f) => f
                .iter()
                .map(|u| ElementClass::from_codim(self.ambient - u.dim()))
                .collect(),
            None => self.elements.par_iter().map(|g| classify(g).expect("square")).collect(),
        })
    }

    pub fn count_class(&self, tag: ClassTag) -> usize {
        self.classes().iter().filter(|c| c.tag == tag).count()
    }

    pub fn reflection_indices(&self) -> Vec<usize> {
        self.indices_with(ClassTag::Reflection)
    }

    pub fn indices_with(&self, tag: ClassTag) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.classes()[i].tag == tag).collect()
    }

    /// Element indices of the subgroup generated by the given elements, sorted.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            for &g in gens {
                let p = self.elements[e].mul(&self.elements[g]).expect("same shape");
                let i = self.index[&p];
                if !inside[i] {
                    inside[i] = true;
                    queue.push(i);
                }
            }
        }
        queue.sort_unstable();
        queue
    }

    /// Whether the group is generated by the elements of the given class,
    /// with a greedy generating set drawn from that class in element order.
    pub fn generated_by_class(&self, tag: ClassTag) -> GenerationCertificate {
        let candidates = self.indices_with(tag);
        let gen_idx: Vec<usize> = self.generators.iter().filter_map(|g| self.index_of(g)).collect();
        if self.order() > 1
            && gen_idx.len() == self.generators.len()
            && gen_idx.iter().all(|&i| self.classes()[i].tag == tag)
        {
            let mut gens = gen_idx;
            gens.sort_unstable();
            gens.dedup();
            return GenerationCertificate {
                generated: true,
                class_size: candidates.len(),
                generators: gens,
                subgroup_order: self.order(),
                group_order: self.order(),
                missing: None,
            };
        }
        let mut gens = Vec::new();
        let mut sub = vec![0usize];
        for &c in &candidates {
            if sub.binary_search(&c).is_err() {
                gens.push(c);
                sub = self.subgroup_generated(&gens);
                if sub.len() == self.order() {
                    break;
                }
            }
        }
        let missing = (0..self.order()).find(|i| sub.binary_search(i).is_err());
        GenerationCertificate {
            generated: self.order() > 1 && missing.is_none(),
            class_size: candidates.len(),
            generators: gens,
            subgroup_order: sub.len(),
            group_order: self.order(),
            missing,
        }
    }

    /// Same group over a larger cyclotomic field.
    pub fn embed(&self, conductor: u32) -> Result<Self> {
        if conductor == self.conductor {
            return Ok(self.clone_shallow());
        }
        let gens = self
            .generators
            .iter()
            .map(|g| g.embed(conductor))
            .collect::<Result<_>>()?;
        let elems = self
            .elements
            .iter()
            .map(|g| g.embed(conductor))
            .collect::<Result<_>>()?;
        Ok(Self::from_elements(
            self.name.clone(),
            self.ambient,
            conductor,
            gens,
            elems,
        ))
    }

    fn clone_shallow(&self) -> Self {
        Self::from_elements(
            self.name.clone(),
            self.ambient,
            self.conductor,
            self.generators.clone(),
            self.elements.clone(),
        )
    }

    /// Block-diagonal product; `a` acts on the first coordinates.
    pub fn direct_sum(a: &MatrixGroup, b: &MatrixGroup) -> Result<Self> {
        let l = lcm(a.conductor, b.conductor);
        let (a, b) = (a.embed(l)?, b.embed(l)?);
        let ia = MatrixF::identity(a.ambient, l);
        let ib = MatrixF::identity(b.ambient, l);
        let mut gens = Vec::new();
        for g in &a.generators {
            gens.push(g.block_diag(&ib)?);
        }
        for g in &b.generators {
            gens.push(ia.block_diag(g)?);
        }
        let mut elems = Vec::with_capacity(a.order() * b.order());
        for x in &a.elements {
            for y in &b.elements {
                elems.push(x.block_diag(y)?);
            }
        }
        let name = match (&a.name, &b.name) {
            (Some(x), Some(y)) => Some(format!("{x}x{y}")),
            _ => None,
        };
        Ok(Self::from_elements(name, a.ambient + b.ambient, l, gens, elems))
    }

    /// Extend by `extra` coordinates on which the group acts trivially.
    pub fn pad_trivial(g: &MatrixGroup, extra: usize) -> Result<Self> {
        if extra == 0 {
            return Ok(g.clone_shallow());
        }
        let mut t = Self::trivial(extra, g.conductor);
        t.name = Some(vec!["1"; extra].join("x"));
        Self::direct_sum(g, &t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationCertificate {
    pub generated: bool,
    pub class_size: usize,
    /// Element indices of a generating subset of the class.
    pub generators: Vec<usize>,
    pub subgroup_order: usize,
    pub group_order: usize,
    /// An element outside the generated subgroup, if any.
    pub missing: Option<usize>,
}

/// True iff the group is nontrivial and generated by its rotations (elements
/// whose fixed space has codimension exactly two).
pub fn is_rotation_group(g: &MatrixGroup) -> GenerationCertificate {
    g.generated_by_class(ClassTag::Rotation)
}

/// Order of `G(m,p,n)`, `m^n n! / p`.
pub fn gmpn_order(m: u32, p: u32, n: usize) -> u128 {
    let fact: u128 = (1..=n as u128).product();
    (m as u128).pow(n as u32) * fact / p as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_gm12(m: u32) -> MatrixGroup {
        MatrixGroup::closure(gm12_real_generators(m).unwrap(), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn generator_shapes() {
        let s2 = gmpn_generators(1, 1, 2).unwrap();
        assert_eq!(s2.len(), 1);
        assert_eq!(s2[0], MatrixF::from_int_rows(4, &[&[0, 1], &[1, 0]]));
        let g = gmpn_generators(5, 1, 2).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(*g[0].get(0, 0), CycNum::zeta_power(20, 4));
        assert!(g[0].get(1, 1).is_one());
        assert!(matches!(gmpn_generators(4, 3, 2), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn small_gmpn_orders() {
        let g = MatrixGroup::closure(gmpn_generators(2, 2, 2).unwrap(), 100).unwrap();
        assert_eq!(g.order(), 4);
        for (m, p, n) in [(3, 3, 2), (4, 2, 2), (2, 1, 3), (3, 1, 1), (6, 3, 2)] {
            let g = MatrixGroup::closure_in(n, lcm(4, m), gmpn_generators(m, p, n).unwrap(), 1000).unwrap();
            assert_eq!(g.order() as u128, gmpn_order(m, p, n), "G({m},{p},{n})");
        }
    }

    #[test]
    fn realify_examples() {
        let d = &gmpn_generators(4, 1, 2).unwrap()[0];
        let r = realify(d).unwrap();
        let expect = MatrixF::from_int_rows(4, &[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(r, expect);
        assert!(realify(&MatrixF::identity(2, 4)).unwrap().is_identity());
        assert!(matches!(
            realify(&MatrixF::identity(2, 3)),
            Err(Error::NoImaginaryUnit(3))
        ));
    }

    #[test]
    fn realify_is_a_monomorphism() {
        for m in 1..=5 {
            let cx = MatrixGroup::closure(gmpn_generators(m, 1, 2).unwrap(), 1000).unwrap();
            let re = real_gm12(m);
            assert_eq!(cx.order(), re.order());
            let images: HashSet<MatrixF> = cx.elements().iter().map(|g| realify(g).unwrap()).collect();
            assert_eq!(images.len(), cx.order());
            assert_eq!(images, re.elements().iter().cloned().collect());
            for a in cx.elements().iter().take(6) {
                for b in cx.elements().iter().rev().take(6) {
                    let lhs = realify(&a.mul(b).unwrap()).unwrap();
                    let rhs = realify(a).unwrap().mul(&realify(b).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn real_gm12_orders_and_classes() {
        for m in 1..=8u32 {
            let g = real_gm12(m);
            assert_eq!(g.order(), 2 * (m * m) as usize);
            assert!(g.classes().iter().all(|c| matches!(c.fix_codim, 0 | 2 | 4)));
            assert_eq!(g.count_class(ClassTag::Identity), 1);
        }
    }

    #[test]
    fn closure_ignores_generator_order() {
        let mut gens = gm12_real_generators(4).unwrap();
        let a = MatrixGroup::closure(gens.clone(), 100).unwrap();
        gens.reverse();
        let b = MatrixGroup::closure(gens, 100).unwrap();
        assert_eq!(a.element_set(), b.element_set());
    }

    #[test]
    fn closure_cap_and_bad_input() {
        let gens = gm12_real_generators(12).unwrap();
        assert!(matches!(
            MatrixGroup::closure(gens, 100),
            Err(Error::ClosureCap { cap: 100 })
        ));
        let sing = MatrixF::from_int_rows(1, &[&[1, 0], &[0, 0]]);
        assert!(MatrixGroup::closure(vec![sing], 10).is_err());
        assert!(MatrixGroup::closure(vec![], 10).is_err());
    }

    #[test]
    fn fixed_spaces_and_classification() {
        let g = gm12_real_generators(5).unwrap();
        let x_zero = Subspace::from_spanning(
            4,
            20,
            MatrixF::from_int_rows(20, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]).row_vecs(),
        )
        .unwrap();
        assert_eq!(fixed_space(&g[0]).unwrap(), x_zero);
        assert_eq!(
            classify(&g[0]).unwrap(),
            ElementClass {
                tag: ClassTag::Rotation,
                fix_codim: 2
            }
        );
        let y_eq_x = Subspace::from_spanning(
            4,
            20,
            MatrixF::from_int_rows(20, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]).row_vecs(),
        )
        .unwrap();
        assert_eq!(fixed_space(&g[1]).unwrap(), y_eq_x);
        assert_eq!(classify(&MatrixF::identity(4, 1)).unwrap().tag, ClassTag::Identity);
        assert_eq!(
            classify(&MatrixF::from_int_rows(1, &[&[-1]])).unwrap(),
            ElementClass {
                tag: ClassTag::Reflection,
                fix_codim: 1
            }
        );
    }

    #[test]
    fn rotation_groups() {
        for m in [2, 4, 7] {
            let cert = is_rotation_group(&real_gm12(m));
            assert!(cert.generated, "m = {m}");
            assert!(cert.missing.is_none());
        }
        assert!(!is_rotation_group(&MatrixGroup::trivial(4, 1)).generated);
        let a1 = MatrixGroup::closure(vec![MatrixF::from_int_rows(1, &[&[-1]])], 10).unwrap();
        let padded = MatrixGroup::pad_trivial(&a1, 3).unwrap();
        let cert = is_rotation_group(&padded);
        assert!(!cert.generated);
        assert_eq!(cert.class_size, 0);
        assert_eq!(cert.missing, Some(1));
    }

    #[test]
    fn group_file_roundtrip() {
        let g = real_gm12(3).with_name(Some("G(3,1,2)".into()));
        let json = serde_json::to_string(&g.to_file()).unwrap();
        let back = MatrixGroup::from_file(serde_json::from_str(&json).unwrap(), 100).unwrap();
        assert_eq!(back.order(), 18);
        assert_eq!(back.name(), Some("G(3,1,2)"));
    }
}
