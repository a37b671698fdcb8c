use std::sync::Arc;

use klr_core::affine_algebra::{AffineElement, GeneratorWord, KLMonomial, Klr, Letter, Perm};
use klr_core::combinatorics::{b_k, Multipartition, StandardTableau};
use klr_core::cyclotomic::{component_monomials, CyclotomicAlgebra, SliceCache};
use klr_core::quiver::{Block, Multicharge, QuiverData, Residue};
use num_bigint::BigInt;
use proptest::prelude::*;

fn q(e: u32) -> QuiverData {
    QuiverData::new(e).unwrap()
}

fn algebra(e: u32, charge: &str, n: usize) -> CyclotomicAlgebra {
    let q = q(e);
    CyclotomicAlgebra::new(Arc::new(Klr::new(q)), Multicharge::parse(&q, charge).unwrap(), n).unwrap()
}

fn word(alg: &CyclotomicAlgebra, letters: Vec<Letter>) -> AffineElement {
    alg.klr().normal_form(&GeneratorWord::new(alg.n(), letters).unwrap()).unwrap()
}

fn shape(s: &str) -> Multipartition {
    Multipartition::parse(s).unwrap()
}

#[test]
fn single_strand_ideal() {
    let alg = algebra(3, "1", 1);
    let b = Block::parse(alg.klr().quiver(), "1").unwrap();
    let c = alg.ideal(&b, 2).unwrap();
    assert!(c.ideal_nonzero());
    assert_eq!((c.slice_dimension, c.quotient_rank()), (1, 0));
    let c = alg.ideal(&b, 0).unwrap();
    assert!(!c.ideal_nonzero());
    assert_eq!(c.quotient_rank(), 1);
}

#[test]
fn cyclotomic_relation_and_idempotents() {
    let alg = algebra(3, "0", 1);
    assert!(alg.is_zero(&word(&alg, vec![Letter::E(vec![0]), Letter::Y(1)])).unwrap());
    assert!(!alg.is_zero(&word(&alg, vec![Letter::E(vec![0])])).unwrap());
    assert!(alg.is_zero(&word(&alg, vec![Letter::E(vec![1])])).unwrap());
    let alg = algebra(3, "0", 2);
    assert!(alg.idempotent_survives(&[0, 1]).unwrap());
    assert!(alg.idempotent_survives(&[0, 2]).unwrap());
    assert!(!alg.idempotent_survives(&[0, 0]).unwrap());
    let alg = algebra(4, "0,2", 2);
    assert!(alg.is_zero(&word(&alg, vec![Letter::E(vec![2, 1]), Letter::Y(1)])).unwrap());
}

#[test]
fn basis_counts() {
    assert_eq!(algebra(3, "0", 3).basis().unwrap().elements.len(), 6);
    assert_eq!(algebra(3, "0,1", 2).basis().unwrap().elements.len(), 8);
    let alg = algebra(3, "0", 3);
    let lam = shape("3");
    let t = StandardTableau::initial(&lam);
    let basis = alg.basis().unwrap();
    let b = &basis.elements[basis.position(&lam, &t, &t).unwrap()];
    assert_eq!(b.element, alg.klr().e_lambda_y_lambda(&lam, alg.charge()).unwrap());
    assert_eq!(b.degree, 2);
}

#[test]
fn rank_examples() {
    let cells = [(3, "0", 2, "2"), (4, "0,2", 2, "8"), (2, "0", 3, "6"), (0, "0", 3, "6"), (0, "0,2,-1", 2, "18")];
    for (e, charge, n, total) in cells {
        let r = algebra(e, charge, n).verify_rank().unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(r.expected, total);
        assert_eq!(r.rank_total.to_string(), total);
    }
}

#[test]
fn expansion_of_basis_elements_is_a_unit_vector() {
    let alg = algebra(3, "0,1", 3);
    let basis = alg.basis().unwrap();
    for (i, b) in basis.elements.iter().enumerate() {
        assert_eq!(alg.expand_in_psi(&b.element).unwrap(), vec![(i, BigInt::from(1))]);
    }
}

/// `e(i_{λ₋} ∨ k) y_{λ₋} y_n^{b_k}` for a one-row shape; the cells above it are empty.
fn one_row_element(alg: &CyclotomicAlgebra, k: Residue) -> AffineElement {
    let mut comps = vec![vec![alg.n() - 1]];
    comps.resize(alg.charge().level(), vec![]);
    let minus = Multipartition::new(comps.into_iter().map(|c| c.into_iter().filter(|&x| x > 0).collect()).collect());
    let b = b_k(&minus, k, alg.charge(), alg.klr().quiver()).unwrap();
    alg.klr().add_node(&minus, alg.charge(), k, b).unwrap()
}

#[test]
fn one_row_vanishing() {
    for e in [3u32, 4] {
        for charge in ["0", "0,1"] {
            for n in 1..=3 {
                let alg = algebra(e, charge, n);
                for k in 0..e as Residue {
                    assert!(alg.is_zero(&one_row_element(&alg, k)).unwrap(), "e={e} κ={charge} n={n} k={k}");
                }
            }
        }
    }
}

#[test]
fn node_adding_identity() {
    // e(i_λ ∨ k) y_λ y_{n+1}^b = e_ν y_ν for b < b_k^λ: the diagram adds a node below the last one.
    let qq = q(4);
    let charge = Multicharge::parse(&qq, "0,0,2,1").unwrap();
    let klr = Klr::new(qq);
    let lam = shape("2|1|-|-");
    let cases: [(Residue, Vec<&str>); 4] =
        [(0, vec![]), (1, vec!["2|1|-|1", "2|2|-|-"]), (2, vec!["2|1|1|-"]), (3, vec!["2|1,1|-|-"])];
    for (k, nu) in cases {
        assert_eq!(b_k(&lam, k, &charge, &qq).unwrap() as usize, nu.len());
        for (b, mu) in nu.iter().enumerate() {
            let got = klr.add_node(&lam, &charge, k, b as u32).unwrap();
            assert_eq!(got, klr.e_lambda_y_lambda(&shape(mu), &charge).unwrap(), "k={k} b={b}");
        }
    }
}

#[test]
fn structure_constant_examples() {
    let alg = algebra(3, "0", 2);
    let lam = shape("2");
    let t = StandardTableau::initial(&lam);
    for r in 1..=2 {
        assert!(alg.structure_constants(&lam, &t, &t, &Letter::Y(r)).unwrap().is_empty());
    }
    let basis = alg.basis().unwrap();
    let res = t.residue_sequence(alg.charge(), alg.klr().quiver()).unwrap();
    let me = basis.position(&lam, &t, &t).unwrap();
    assert_eq!(alg.structure_constants(&lam, &t, &t, &Letter::E(res)).unwrap(), vec![(me, BigInt::from(1))]);
    assert!(alg.structure_constants(&lam, &t, &t, &Letter::E(vec![1, 0])).unwrap().is_empty());
    // t^λ s₁ is not standard for a row, so take the column (1,1) at level 2 instead.
    let alg = algebra(3, "0,1", 2);
    let mu = shape("1|1");
    let tm = StandardTableau::initial(&mu);
    let ts = tm.swap(1).unwrap();
    let basis = alg.basis().unwrap();
    let got = alg.structure_constants(&mu, &tm, &tm, &Letter::Psi(1)).unwrap();
    assert_eq!(got, vec![(basis.position(&mu, &tm, &ts).unwrap(), BigInt::from(1))]);
    assert!(alg.structure_constants(&mu, &tm, &tm, &Letter::Psi(2)).is_err());
}

#[test]
fn min_degree_examples() {
    use klr_core::cyclotomic::min_degree;
    let alg = algebra(3, "2", 1);
    assert_eq!(min_degree(&alg, &Block::parse(alg.klr().quiver(), "2").unwrap()).unwrap(), 2);
    let alg = algebra(3, "2,2", 1);
    assert_eq!(min_degree(&alg, &Block::parse(alg.klr().quiver(), "2").unwrap()).unwrap(), 4);
}

#[test]
fn cached_slices_match_fresh_ones() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = algebra(3, "0,1", 3).verify_rank().unwrap();
    let first = algebra(3, "0,1", 3).with_cache(Some(SliceCache::new(dir.path()).unwrap())).verify_rank().unwrap();
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(files > 0);
    let second = algebra(3, "0,1", 3).with_cache(Some(SliceCache::new(dir.path()).unwrap())).verify_rank().unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), files);
    let json = |r| serde_json::to_string(&r).unwrap();
    assert_eq!(json(fresh.clone()), json(first));
    assert_eq!(json(fresh), json(second));
}

#[test]
fn corrupt_cache_records_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let alg = algebra(3, "0", 2).with_cache(Some(SliceCache::new(dir.path()).unwrap()));
    alg.verify_rank().unwrap();
    for f in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(f.unwrap().path(), "{not json").unwrap();
    }
    let alg = algebra(3, "0", 2).with_cache(Some(SliceCache::new(dir.path()).unwrap()));
    assert!(alg.verify_rank().is_err());
}

fn random_monomial(qq: &QuiverData, top: Vec<Residue>, ys: Vec<u32>, w: usize) -> KLMonomial {
    let perms = Perm::all(top.len());
    let _ = qq;
    KLMonomial::new(top, ys, perms[w % perms.len()].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduction_respects_right_multiplication(
        top in proptest::collection::vec(0i64..3, 3),
        ys in proptest::collection::vec(0u32..2, 3),
        w in 0usize..6,
        right in proptest::collection::vec(0usize..5, 0..4),
    ) {
        let alg = algebra(3, "0,1", 3);
        let qq = *alg.klr().quiver();
        let x = AffineElement::monomial(random_monomial(&qq, top, ys, w));
        let letters: Vec<Letter> = right.iter().map(|&g| match g { 0 | 1 => Letter::Psi(g + 1), _ => Letter::Y(g - 1) }).collect();
        let lhs = alg.reduce(&alg.klr().fold(x.clone(), &letters)).unwrap();
        let rhs = alg.reduce(&alg.klr().fold(alg.reduce(&x).unwrap(), &letters)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_is_idempotent_and_expansion_reconstructs(
        top in proptest::collection::vec(0i64..3, 3),
        ys in proptest::collection::vec(0u32..3, 3),
        w in 0usize..6,
    ) {
        let alg = algebra(3, "0", 3);
        let qq = *alg.klr().quiver();
        let x = AffineElement::monomial(random_monomial(&qq, top, ys, w));
        let r = alg.reduce(&x).unwrap();
        prop_assert_eq!(alg.reduce(&r).unwrap(), r.clone());
        let basis = alg.basis().unwrap();
        let mut sum = AffineElement::zero(3);
        for (i, c) in alg.expand_in_psi(&x).unwrap() {
            sum.add_scaled(&basis.elements[i].element, &c);
        }
        prop_assert_eq!(alg.reduce(&sum).unwrap(), r);
    }

    #[test]
    fn ideals_shrink_as_the_weight_grows(
        seq in proptest::collection::vec(0i64..3, 2),
        d in -2i64..5,
    ) {
        // Λ₀ ≤ Λ₀ + Λ₁ ≤ 2Λ₀ + Λ₁: each ideal slice contains the next.
        let qq = q(3);
        let klr = Arc::new(Klr::new(qq));
        let b = Block::of_sequence(&qq, &seq);
        let mut prev: Option<Vec<Vec<(usize, BigInt)>>> = None;
        for charge in ["0", "0,1", "0,0,1"] {
            let alg = CyclotomicAlgebra::new(klr.clone(), Multicharge::parse(&qq, charge).unwrap(), 2).unwrap();
            let rows = alg.ideal(&b, d).unwrap().full_hnf(&qq, alg.weight()).unwrap();
            if let Some(bigger) = &prev {
                let mut lat = klr_core::intlinalg::RowLattice::new(component_monomials(&qq, &b, d).len());
                for r in bigger { lat.insert(r).unwrap(); }
                for r in &rows { prop_assert!(lat.contains(r).unwrap()); }
            }
            prev = Some(rows);
        }
    }
}

fn with_empty_component(t: &StandardTableau) -> StandardTableau {
    let mut rows = t.rows().to_vec();
    rows.push(Vec::new());
    StandardTableau::from_rows(rows).unwrap()
}

#[test]
fn appending_an_empty_component_multiplies_by_y() {
    for e in [2u32, 3] {
        let qq = q(e);
        let klr = Klr::new(qq);
        for bar in ["0", "1", "0,1", "0,0"] {
            let bar = Multicharge::parse(&qq, bar).unwrap();
            for k in 0..e as Residue {
                let mut entries = bar.entries().to_vec();
                entries.push(k);
                let charge = Multicharge::new(&qq, entries);
                for n in 1..=3 {
                    for lam in Multipartition::all(n, bar.level()) {
                        let tabs = StandardTableau::all(&lam);
                        let mut comps = lam.components().to_vec();
                        comps.push(Vec::new());
                        let mu = Multipartition::new(comps);
                        for u in &tabs {
                            for v in &tabs {
                                let (uu, vv) = (with_empty_component(u), with_empty_component(v));
                                let lhs = klr.psi_st(&mu, &charge, &uu, &vv).unwrap();
                                let iv = v.residue_sequence(&bar, &qq).unwrap();
                                let ys: Vec<Letter> = (1..=n).filter(|&r| iv[r - 1] == k).map(Letter::Y).collect();
                                let rhs = klr.fold(klr.psi_st(&lam, &bar, u, v).unwrap(), &ys);
                                assert_eq!(lhs, rhs, "e={e} κ={charge} {u} {v}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn straightening_contracts_small() {
    for charge in ["0", "0,1", "2,0"] {
        for n in 1..=3 {
            let alg = algebra(3, charge, n);
            let mut gens: Vec<Letter> = (1..=n).map(Letter::Y).chain((1..n).map(Letter::Psi)).collect();
            gens.push(Letter::E(vec![0; n]));
            for b in alg.basis().unwrap().elements.iter() {
                for g in &gens {
                    let bad = alg.straightening_violations(&b.shape, &b.s, &b.t, g).unwrap();
                    assert!(bad.is_empty(), "{bad:?}");
                }
            }
        }
    }
}
