use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rotarr::arrangements::{
    isotropy_arrangement, phase_ratio, plane_meet_count, reflection_arrangement, same_phase, sample_coordinate_plane,
    structural_dichotomy_check, PhaseValue,
};
use rotarr::groups::{catalog_group, gm12_real_generators, CatalogLabel, MatrixGroup, DEFAULT_CAP};
use rotarr::{CycNum, Error, MatrixF, Rational};

fn group(s: &str) -> std::sync::Arc<MatrixGroup> {
    catalog_group(&s.parse::<CatalogLabel>().unwrap()).unwrap()
}

fn bound(m: u32) -> usize {
    if m.is_multiple_of(2) {
        2
    } else {
        1
    }
}

/// Rational rotation by a Pythagorean triple in the `(i, j)` coordinate plane.
fn givens(n: usize, i: usize, j: usize, (a, b, c): (i64, i64, i64), conductor: u32) -> MatrixF {
    let mut q = MatrixF::identity(n, conductor);
    let r = |p: i64| CycNum::from_rational(conductor, Rational::new(p, c));
    q.set(i, i, r(a));
    q.set(j, j, r(a));
    q.set(i, j, r(-b));
    q.set(j, i, r(b));
    q
}

fn conjugate(w: &MatrixGroup, q: &MatrixF) -> MatrixGroup {
    let qt = q.transpose();
    let gens = w
        .generators()
        .iter()
        .map(|g| q.mul(g).unwrap().mul(&qt).unwrap())
        .collect();
    MatrixGroup::closure_in(w.ambient(), w.conductor(), gens, DEFAULT_CAP).unwrap()
}

#[test]
fn lemma_ag_strata_for_small_m() {
    for m in 2..=12u32 {
        let g = MatrixGroup::closure(gm12_real_generators(m).unwrap(), DEFAULT_CAP).unwrap();
        let a = isotropy_arrangement(&g);
        assert_eq!(a.strata(), vec![1, 0, m as usize + 2, 0, 0], "m={m}");
        let planes: Vec<_> = a.of_dim(2).collect();
        for (i, p) in planes.iter().enumerate() {
            for q in &planes[i + 1..] {
                assert!(p.intersect(q).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn oracle_equivalence_on_small_catalog() {
    for l in [
        "A1",
        "A1xA1",
        "A3",
        "B3",
        "H3",
        "I2(7)xA1",
        "A4",
        "B4",
        "D4",
        "B3xA1",
        "H3x1",
        "I2(5)xI2(12)",
    ] {
        let w = group(l);
        assert_eq!(
            isotropy_arrangement(&w).subspaces,
            reflection_arrangement(&w).unwrap().subspaces,
            "{l}"
        );
    }
}

#[test]
fn dichotomy_with_paddings() {
    for p in 2..=8 {
        let l = if p == 2 {
            "A1xA1xA1xA1".to_string()
        } else {
            format!("I2({p})xA1xA1")
        };
        assert!(structural_dichotomy_check(&group(&l)).unwrap().holds, "{l}");
    }
}

#[test]
fn dichotomy_rejects_mixed_blocks() {
    let w = group("I2(3)xI2(4)");
    let q = givens(4, 1, 2, (3, 4, 5), w.conductor());
    let err = structural_dichotomy_check(&conjugate(&w, &q)).unwrap_err();
    assert!(matches!(err, Error::FactorStructure(_)));
}

const TRIPLES: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn counts_survive_orthogonal_conjugation(
        which in prop::sample::select(vec!["A3xA1", "I2(5)xI2(3)", "B3x1", "I2(4)xA1xA1"]),
        moves in prop::collection::vec((0usize..4, 1usize..4, 0usize..3), 1..4),
    ) {
        let w = group(which);
        let l = w.conductor();
        let mut q = MatrixF::identity(4, l);
        for (i, d, t) in moves {
            let j = (i + d) % 4;
            q = q.mul(&givens(4, i, j, TRIPLES[t], l)).unwrap();
        }
        let a = reflection_arrangement(&w).unwrap();
        let b = reflection_arrangement(&conjugate(&w, &q)).unwrap();
        prop_assert_eq!(a.len(), b.len());
        prop_assert_eq!(a.strata(), b.strata());
    }

    #[test]
    fn plane_meetings_and_phase(m in 2u32..13, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (v, w, p) = sample_coordinate_plane(&mut rng, 4);
        let count = plane_meet_count(&p, m).unwrap();
        prop_assert!(count <= bound(m));
        if m >= 3 {
            // No sampled plane meets all m + 2 planes of the arrangement.
            prop_assert!(count < m as usize);
        }
        let comb = |a: i64, b: i64| -> Vec<CycNum> {
            v.iter().zip(&w).map(|(x, y)| &x.scale(&Rational::from(a)) + &y.scale(&Rational::from(b))).collect()
        };
        let base = phase_ratio(&comb(1, 1)).unwrap();
        prop_assert!(base.is_defined());
        for (a, b) in [(2, 3), (7, 1), (1, 9)] {
            prop_assert!(same_phase(&base, &phase_ratio(&comb(a, b)).unwrap()).unwrap());
            let flipped = phase_ratio(&comb(a, -b)).unwrap();
            prop_assert!(!same_phase(&base, &flipped).unwrap());
            let PhaseValue::Defined { ratio, modulus_sq } = flipped else { unreachable!() };
            let negated = PhaseValue::Defined { ratio: -ratio, modulus_sq };
            prop_assert!(same_phase(&base, &negated).unwrap());
        }
    }
}
