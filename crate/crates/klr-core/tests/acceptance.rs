//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact integer or set equality. Runtime limits: 300 s for the largest
//! rank cell, 60 s for the whole affine basis sweep.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use klr_core::affine_algebra::{all_sequences, AffineElement, Fold, GeneratorWord, Klr, Letter, Strategy};
use klr_core::combinatorics::{b_k, Multipartition, SequenceKind, StandardTableau, WeightSequence};
use klr_core::cyclotomic::{affine_basis_check, min_degree, CyclotomicAlgebra, SliceCache};
use klr_core::quiver::{Block, Multicharge, QuiverData, Residue, Weight};
use klr_core::repn::classify_simples;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const RANK_CELL_LIMIT: Duration = Duration::from_secs(300);
const AFFINE_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_WORDS: usize = 200;

type Outcome = Result<String, String>;

fn q(e: u32) -> QuiverData {
    QuiverData::new(e).unwrap()
}

fn algebra(klr: &Arc<Klr>, charge: &str, n: usize) -> CyclotomicAlgebra {
    CyclotomicAlgebra::new(klr.clone(), Multicharge::parse(klr.quiver(), charge).unwrap(), n).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rank_theorem() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let grid: [(u32, &str, &[(usize, u64)]); 3] = [
        (3, "0", &[(1, 1), (2, 2), (3, 6), (4, 24)]),
        (4, "0,2", &[(1, 2), (2, 8), (3, 48)]),
        (2, "0", &[(1, 1), (2, 2), (3, 6)]),
    ];
    let mut slowest = Duration::ZERO;
    let mut slices = 0;
    for (e, charge, cells) in grid {
        let klr = Arc::new(Klr::new(q(e)));
        for &(n, want) in cells {
            let cache = || Some(SliceCache::new(dir.path()).unwrap());
            let start = Instant::now();
            let report = algebra(&klr, charge, n).with_cache(cache()).verify_rank().map_err(|e| e.to_string())?;
            let took = start.elapsed();
            slowest = slowest.max(took);
            ensure(took <= RANK_CELL_LIMIT, || format!("e={e} κ={charge} n={n} took {took:?}"))?;
            ensure(report.ok, || format!("e={e} κ={charge} n={n}: {report:?}"))?;
            ensure(report.expected == want.to_string() && report.rank_total as u64 == want, || {
                format!("e={e} κ={charge} n={n}: rank {} expected {want}", report.rank_total)
            })?;
            // A second pass served from the cache must give the identical report.
            let again =
                algebra(&Arc::new(Klr::new(q(e))), charge, n).with_cache(cache()).verify_rank().map_err(|e| e.to_string())?;
            ensure(again == report, || format!("e={e} κ={charge} n={n}: cached report differs"))?;
            slices += report.slices.len() + report.empty_blocks.len();
        }
    }
    Ok(format!("10 cells, {slices} slices, slowest cell {slowest:.2?}"))
}

fn one_row_element(klr: &Klr, charge: &Multicharge, n: usize, k: Residue) -> AffineElement {
    let mut comps = vec![if n > 1 { vec![n - 1] } else { vec![] }];
    comps.resize(charge.level(), vec![]);
    let minus = Multipartition::new(comps);
    let b = b_k(&minus, k, charge, klr.quiver()).unwrap();
    klr.add_node(&minus, charge, k, b).unwrap()
}

fn one_row_vanishing() -> Outcome {
    let mut count = 0;
    for e in [2u32, 3, 4] {
        let klr = Arc::new(Klr::new(q(e)));
        for charge in ["0", "1", "0,1", "0,0"] {
            for n in 1..=4 {
                let alg = algebra(&klr, charge, n);
                for k in 0..e as Residue {
                    let x = one_row_element(&klr, alg.charge(), n, k);
                    let r = alg.reduce(&x).map_err(|e| e.to_string())?;
                    ensure(r.is_zero(), || format!("e={e} κ={charge} n={n} k={k}: {r}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} elements reduce to 0"))
}

fn idempotent_support() -> Outcome {
    let mut count = 0;
    for e in [2u32, 3] {
        let qq = q(e);
        let klr = Arc::new(Klr::new(qq));
        for charge in ["0", "1", "0,1", "0,0"] {
            for n in 1..=3 {
                let alg = algebra(&klr, charge, n);
                let mut oracle = BTreeSet::new();
                for lam in Multipartition::all(n, alg.charge().level()) {
                    for t in StandardTableau::all(&lam) {
                        oracle.insert(t.residue_sequence(alg.charge(), &qq).unwrap());
                    }
                }
                for i in all_sequences(&qq.residues(), n) {
                    let got = alg.idempotent_survives(&i).map_err(|e| e.to_string())?;
                    ensure(got == oracle.contains(&i), || format!("e={e} κ={charge} e({i:?}): nonzero={got}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} idempotents"))
}

fn straightening() -> Outcome {
    let qq = q(3);
    let klr = Arc::new(Klr::new(qq));
    let mut charges: Vec<String> = (0..3).map(|a| a.to_string()).collect();
    for a in 0..3 {
        for b in 0..3 {
            charges.push(format!("{a},{b}"));
        }
    }
    let mut count = 0;
    for charge in &charges {
        for n in 1..=3 {
            let alg = algebra(&klr, charge, n);
            let mut gens: Vec<Letter> = (1..=n).map(Letter::Y).chain((1..n).map(Letter::Psi)).collect();
            gens.extend(all_sequences(&qq.residues(), n).into_iter().map(Letter::E));
            for b in alg.basis().map_err(|e| e.to_string())?.elements.iter() {
                for g in &gens {
                    let bad = alg.straightening_violations(&b.shape, &b.s, &b.t, g).map_err(|e| e.to_string())?;
                    ensure(bad.is_empty(), || format!("κ={charge}: {}", bad.join("; ")))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} products over {} multicharges", charges.len()))
}

fn random_word(rng: &mut StdRng, e: u32, n: usize) -> GeneratorWord {
    let seq = |rng: &mut StdRng| (0..n).map(|_| rng.gen_range(0..e as Residue)).collect::<Vec<_>>();
    let mut letters = vec![Letter::E(seq(rng))];
    for _ in 0..rng.gen_range(0..=8) {
        letters.push(match rng.gen_range(0..3) {
            0 => Letter::Y(rng.gen_range(1..=n)),
            1 if n > 1 => Letter::Psi(rng.gen_range(1..n)),
            _ => Letter::E(seq(rng)),
        });
    }
    GeneratorWord::new(n, letters).unwrap()
}

fn rewriting_soundness() -> Outcome {
    use Letter::{Psi, Y};
    let strategies = [
        Strategy::default(),
        Strategy { fold: Fold::Balanced, reverse_braids: false },
        Strategy { fold: Fold::ViaStar, reverse_braids: true },
        Strategy { fold: Fold::LeftToRight, reverse_braids: true },
    ];
    let mut rng = StdRng::seed_from_u64(0x6b6c72);
    let mut nonzero = 0;
    for w in 0..RANDOM_WORDS {
        let e = [2, 3, 4][w % 3];
        let n = rng.gen_range(1..=3);
        let word = random_word(&mut rng, e, n);
        let nfs: Vec<AffineElement> = strategies
            .iter()
            .map(|s| Klr::with_strategy(q(e), *s).normal_form(&word).unwrap())
            .collect();
        ensure(nfs.iter().all(|x| x == &nfs[0]), || format!("strategies disagree on {word}"))?;
        nonzero += usize::from(!nfs[0].is_zero());
    }
    let mut identities = 0;
    for e in [2u32, 3] {
        let klr = Klr::new(q(e));
        for n in 2..=3 {
            for r in 1..n {
                for i in all_sequences(&q(e).residues(), n) {
                    let w = |ls: &[Letter]| {
                        let mut v = vec![Letter::E(i.clone())];
                        v.extend(ls.iter().cloned());
                        klr.normal_form(&GeneratorWord::new(n, v).unwrap()).unwrap()
                    };
                    for pow in 0..=3 {
                        let ys: Vec<Letter> = (0..pow).flat_map(|_| [Y(r), Y(r + 1)]).collect();
                        let mut lhs = ys.clone();
                        lhs.push(Psi(r));
                        let mut rhs = vec![Psi(r)];
                        rhs.extend(ys);
                        ensure(w(&lhs) == w(&rhs), || format!("y-ψ commutation: i={i:?} r={r}"))?;
                        identities += 1;
                    }
                    if i[r - 1] != i[r] {
                        continue;
                    }
                    let minus = |x: AffineElement| x.scaled(&BigInt::from(-1));
                    let rhs = w(&[Psi(r), Y(r), Y(r), Psi(r)]).plus(&w(&[Psi(r), Y(r)])).plus(&w(&[Y(r), Psi(r)]));
                    ensure(w(&[]) == minus(rhs), || format!("ii: i={i:?} r={r}"))?;
                    let rhs = w(&[Psi(r), Y(r), Y(r), Psi(r), Y(r + 1)])
                        .plus(&w(&[Psi(r), Y(r), Y(r + 1)]))
                        .plus(&w(&[Y(r), Y(r), Psi(r)]))
                        .plus(&w(&[Y(r)]));
                    ensure(w(&[Y(r + 1)]) == minus(rhs), || format!("ii2: i={i:?} r={r}"))?;
                    let psi = w(&[Psi(r)]);
                    let forms = [
                        w(&[Y(r + 1), Psi(r), Psi(r)]).minus(&w(&[Psi(r), Y(r), Psi(r)])),
                        minus(w(&[Psi(r), Y(r), Psi(r)])),
                        w(&[Psi(r), Y(r + 1), Psi(r)]).minus(&w(&[Y(r), Psi(r), Psi(r)])),
                        w(&[Psi(r), Y(r + 1), Psi(r)]),
                    ];
                    ensure(forms.iter().all(|x| x == &psi), || format!("ii3: i={i:?} r={r}"))?;
                    identities += 3;
                }
            }
        }
    }
    Ok(format!("{RANDOM_WORDS} words ({nonzero} nonzero), {identities} identity instances"))
}

fn classification() -> Outcome {
    let mut shapes = 0;
    for (e, charge, max_n) in [(2u32, "0", 4), (3, "0", 4), (3, "0,1", 3)] {
        let klr = Arc::new(Klr::new(q(e)));
        for n in 1..=max_n {
            let c = classify_simples(&algebra(&klr, charge, n), None).map_err(|e| e.to_string())?;
            ensure(c.agree, || format!("e={e} κ={charge} n={n}: {:?} vs {:?}", c.simples, c.kleshchev))?;
            shapes += c.simples.len();
        }
    }
    Ok(format!("{shapes} simple heads, all Kleshchev"))
}

fn blocks(residues: &[Residue], qq: &QuiverData, max_n: usize) -> Vec<Block> {
    let mut out = BTreeSet::new();
    for n in 1..=max_n {
        for s in all_sequences(residues, n) {
            out.insert(Block::of_sequence(qq, &s));
        }
    }
    out.into_iter().collect()
}

fn affine_basis() -> Outcome {
    let start = Instant::now();
    let qq = q(3);
    let klr = Arc::new(Klr::new(qq));
    let mut slices = 0;
    for seed in ["L0", "L1", "L0+L1"] {
        let ws = WeightSequence::new(SequenceKind::Cyclic, &qq, Weight::parse(&qq, seed).unwrap()).unwrap();
        for b in blocks(&qq.residues(), &qq, 2) {
            let n = b.size() as i64;
            for d in -n * (n - 1) - 2..=6 {
                let r = affine_basis_check(klr.clone(), &ws, &b, d).map_err(|e| e.to_string())?;
                ensure(r.ok(), || format!("seed {seed}: {r:?}"))?;
                slices += 1;
            }
        }
    }
    let took = start.elapsed();
    ensure(took <= AFFINE_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("{slices} slices in {took:.2?}"))
}

fn min_degree_divergence() -> Outcome {
    let specs: [(SequenceKind, u32, &str); 5] = [
        (SequenceKind::Cyclic, 3, "L0"),
        (SequenceKind::Cyclic, 3, "L1"),
        (SequenceKind::Cyclic, 2, "L0"),
        (SequenceKind::Cyclic, 4, "L0+L2"),
        (SequenceKind::Spiral, 0, "L0"),
    ];
    let mut count = 0;
    for (kind, e, seed) in specs {
        let qq = q(e);
        let klr = Arc::new(Klr::new(qq));
        let ws = WeightSequence::new(kind, &qq, Weight::parse(&qq, seed).unwrap()).unwrap();
        let residues: Vec<Residue> = if e > 0 {
            qq.residues()
        } else {
            let ks = ws.inverse_multicharge(ws.level(4));
            (ks.iter().min().unwrap() - 1..=ks.iter().max().unwrap() + 1).collect()
        };
        for b in blocks(&residues, &qq, 2) {
            let n = b.size() as i64;
            let mut prev = i64::MIN;
            for k in 1..=4 {
                let alg = CyclotomicAlgebra::new(klr.clone(), ws.multicharge(ws.level(k)), b.size()).unwrap();
                let m = min_degree(&alg, &b).map_err(|e| e.to_string())?;
                let bound = 2 * i64::from(ws.a_alpha(k, &b)) - 2 * n * (n - 1);
                ensure(m >= bound, || format!("seed {seed} e={e} {b} k={k}: m={m} below {bound}"))?;
                ensure(m >= prev, || format!("seed {seed} e={e} {b} k={k}: m={m} after {prev}"))?;
                prev = m;
                count += 1;
            }
        }
    }
    Ok(format!("{count} minimum degrees"))
}

fn empty_component() -> Outcome {
    let mut count = 0;
    for e in [2u32, 3] {
        let qq = q(e);
        let klr = Klr::new(qq);
        let mut bars: Vec<Vec<Residue>> = (0..e as Residue).map(|a| vec![a]).collect();
        for a in 0..e as Residue {
            for b in 0..e as Residue {
                bars.push(vec![a, b]);
            }
        }
        for bar in bars {
            let bar = Multicharge::new(&qq, bar);
            for k in 0..e as Residue {
                let mut entries = bar.entries().to_vec();
                entries.push(k);
                let charge = Multicharge::new(&qq, entries);
                for n in 1..=3 {
                    for lam in Multipartition::all(n, bar.level()) {
                        let mut comps = lam.components().to_vec();
                        comps.push(Vec::new());
                        let mu = Multipartition::new(comps);
                        let extend = |t: &StandardTableau| {
                            let mut rows = t.rows().to_vec();
                            rows.push(Vec::new());
                            StandardTableau::from_rows(rows).unwrap()
                        };
                        let tabs = StandardTableau::all(&lam);
                        for u in &tabs {
                            for v in &tabs {
                                let lhs = klr.psi_st(&mu, &charge, &extend(u), &extend(v)).unwrap();
                                let iv = v.residue_sequence(&bar, &qq).unwrap();
                                let ys: Vec<Letter> = (1..=n).filter(|&r| iv[r - 1] == k).map(Letter::Y).collect();
                                let rhs = klr.fold(klr.psi_st(&lam, &bar, u, v).unwrap(), &ys);
                                ensure(lhs == rhs, || format!("κ={charge} ({u}, {v})"))?;
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{count} identities"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("rank theorem", rank_theorem),
        ("one-row vanishing", one_row_vanishing),
        ("idempotent support", idempotent_support),
        ("straightening contracts", straightening),
        ("rewriting soundness", rewriting_soundness),
        ("simple-module classification", classification),
        ("affine basis", affine_basis),
        ("minimum-degree divergence", min_degree_divergence),
        ("empty-component identity", empty_component),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
