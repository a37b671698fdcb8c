//! The subcommands, each producing a human rendering and a JSON value.

use std::path::Path;
use std::sync::Arc;

use klr_core::affine_algebra::{Klr, Letter};
use klr_core::combinatorics::{is_kleshchev, Multipartition, SequenceKind, StandardTableau, WeightSequence};
use klr_core::cyclotomic::{affine_basis_check, min_degree, CyclotomicAlgebra, SliceCache};
use klr_core::quiver::{Block, Multicharge, QuiverData, Weight};
use klr_core::repn::{classify_simples, gram_matrix, graded_dimension};
use klr_core::{KlrError, Result};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::expr::{parse_for, Combination};
use crate::render::render_element;

/// What a command prints. `mismatch` marks a completed computation whose verification failed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub human: String,
    pub json: Value,
    pub mismatch: bool,
}

impl Outcome {
    fn ok(human: String, json: Value) -> Self {
        Outcome { human, json: decimal_strings(json), mismatch: false }
    }

    fn checked(human: String, json: Value, ok: bool) -> Self {
        Outcome { mismatch: !ok, ..Outcome::ok(human, json) }
    }
}

/// Every JSON number becomes a decimal string, so big coefficients and small counts are read alike.
pub fn decimal_strings(v: Value) -> Value {
    match v {
        Value::Number(x) => Value::String(x.to_string()),
        Value::Array(xs) => Value::Array(xs.into_iter().map(decimal_strings).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, x)| (k, decimal_strings(x))).collect()),
        other => other,
    }
}

pub struct Session {
    pub klr: Arc<Klr>,
    pub charge: Multicharge,
    pub n: Option<usize>,
    pub cache: Option<SliceCache>,
}

impl Session {
    pub fn new(e: u32, charge: &str, n: Option<usize>, cache_dir: Option<&Path>) -> Result<Self> {
        let q = QuiverData::new(e)?;
        let charge = Multicharge::parse(&q, charge)?;
        let cache = cache_dir.map(SliceCache::new).transpose()?;
        Ok(Session { klr: Arc::new(Klr::new(q)), charge, n, cache })
    }

    fn q(&self) -> &QuiverData {
        self.klr.quiver()
    }

    fn need_n(&self) -> Result<usize> {
        self.n.ok_or_else(|| KlrError::InvalidInput("this command needs --n".into()))
    }

    fn algebra(&self, n: usize) -> Result<CyclotomicAlgebra> {
        if let Some(m) = self.n.filter(|&m| m != n) {
            return Err(KlrError::StrandMismatch(m, n));
        }
        Ok(CyclotomicAlgebra::new(self.klr.clone(), self.charge.clone(), n)?.with_cache(self.cache.clone()))
    }

    fn header(&self, n: usize) -> Value {
        json!({ "e": self.q().e(), "charge": self.charge.to_string(), "n": n })
    }

    fn shape(&self, text: &str) -> Result<Multipartition> {
        let shape = Multipartition::parse(text)?;
        if shape.level() != self.charge.level() {
            return Err(KlrError::InvalidInput(format!(
                "{shape} has {} components but the multicharge has level {}",
                shape.level(),
                self.charge.level()
            )));
        }
        Ok(shape)
    }

    /// Parses an expression on `--n` strands, or on as many as its idempotents name.
    fn expression(&self, text: &str) -> Result<(usize, Combination)> {
        let probe = crate::expr::parse_expression(text)?;
        let n = self.n.or(probe.strands()).ok_or_else(|| {
            KlrError::InvalidInput("give --n or an idempotent e(..) fixing the number of strands".into())
        })?;
        Ok((n, parse_for(text, n)?))
    }
}

fn label(alg: &CyclotomicAlgebra, idx: usize) -> Result<String> {
    Ok(alg.basis()?.elements[idx].to_string())
}

fn element_json(x: &klr_core::affine_algebra::AffineElement) -> Value {
    json!({ "text": x.to_string(), "zero": x.is_zero(), "terms": x.to_records() })
}

pub fn basis(s: &Session, block: Option<&str>, degree: Option<i64>) -> Result<Outcome> {
    let n = s.need_n()?;
    let alg = s.algebra(n)?;
    let block = block.map(|b| Block::parse(s.q(), b)).transpose()?;
    let basis = alg.basis()?;
    let chosen: Vec<_> = basis
        .elements
        .iter()
        .filter(|b| block.as_ref().is_none_or(|a| &b.block == a) && degree.is_none_or(|d| b.degree == d))
        .collect();
    let mut human = String::new();
    for b in &chosen {
        human += &format!("{b}  degree {}  block {}\n", b.degree, b.block);
    }
    human += &format!("{} elements\n", chosen.len());
    let rows: Vec<Value> = chosen
        .iter()
        .map(|b| {
            json!({
                "shape": b.shape.to_string(), "s": b.s.to_string(), "t": b.t.to_string(),
                "degree": b.degree, "block": b.block.to_string(),
            })
        })
        .collect();
    let mut j = s.header(n);
    j["count"] = json!(chosen.len());
    j["elements"] = Value::Array(rows);
    Ok(Outcome::ok(human, j))
}

/// Normal form in `R_n`, or in `R^Λ_n` with `cyclotomic`.
pub fn reduce(s: &Session, text: &str, cyclotomic: bool) -> Result<Outcome> {
    let (n, c) = s.expression(text)?;
    let mut x = c.to_element(&s.klr, n)?;
    if cyclotomic {
        x = s.algebra(n)?.reduce(&x)?;
    }
    let mut j = s.header(n);
    j["modulo"] = json!(if cyclotomic { "cyclotomic" } else { "none" });
    j["element"] = element_json(&x);
    Ok(Outcome::ok(format!("{x}\n"), j))
}

pub fn expand(s: &Session, text: &str) -> Result<Outcome> {
    let (n, c) = s.expression(text)?;
    let alg = s.algebra(n)?;
    let x = c.to_element(&s.klr, n)?;
    let coeffs = alg.expand_in_psi(&x)?;
    let mut human = String::new();
    let mut rows = Vec::new();
    for (i, c) in &coeffs {
        let l = label(&alg, *i)?;
        human += &format!("{c} · {l}\n");
        rows.push(json!({ "coefficient": c.to_string(), "basis": l }));
    }
    if coeffs.is_empty() {
        human += "0\n";
    }
    let mut j = s.header(n);
    j["expansion"] = Value::Array(rows);
    Ok(Outcome::ok(human, j))
}

pub fn verify_rank(s: &Session) -> Result<Outcome> {
    let n = s.need_n()?;
    let r = s.algebra(n)?.verify_rank()?;
    let mut human = String::new();
    for sl in r.slices.iter().chain(&r.empty_blocks) {
        human += &format!(
            "{:<16} degree {:>3}  rank {:>4} / {:<4} {}\n",
            sl.alpha,
            sl.degree,
            sl.quotient_rank,
            sl.psi_count,
            if sl.ok() { "ok" } else { "MISMATCH" }
        );
    }
    human += &format!(
        "total rank {} ({} ψ-elements), expected {}: {}\n",
        r.rank_total,
        r.psi_total,
        r.expected,
        if r.ok { "ok" } else { "MISMATCH" }
    );
    if !r.note.is_empty() {
        human += &format!("{}\n", r.note);
    }
    let json = serde_json::to_value(&r).map_err(|e| KlrError::InvalidInput(e.to_string()))?;
    Ok(Outcome::checked(human, json, r.ok))
}

pub fn structure(s: &Session, lambda: &str, st: &str, tt: &str, generator: &str) -> Result<Outcome> {
    let shape = s.shape(lambda)?;
    let (ts, tt) = (StandardTableau::parse(st)?, StandardTableau::parse(tt)?);
    let n = shape.size();
    let alg = s.algebra(n)?;
    let c = parse_for(generator, n)?;
    let g: Letter = match c.terms.as_slice() {
        [(k, w)] if k.is_one() && w.len() == 1 => w[0].clone(),
        _ => return Err(KlrError::InvalidInput(format!("{generator:?} is not a single generator"))),
    };
    let coeffs = alg.structure_constants(&shape, &ts, &tt, &g)?;
    let violations = alg.straightening_violations(&shape, &ts, &tt, &g)?;
    let basis = alg.basis()?;
    let mut human = String::new();
    let mut rows = Vec::new();
    for (i, c) in &coeffs {
        let b = &basis.elements[*i];
        human += &format!("{c} · {b}\n");
        rows.push(json!({ "coefficient": c.to_string(), "shape": b.shape.to_string(), "s": b.s.to_string(), "t": b.t.to_string() }));
    }
    if coeffs.is_empty() {
        human += "0\n";
    }
    for v in &violations {
        human += &format!("violation: {v}\n");
    }
    let mut j = s.header(n);
    j["product"] = json!(format!("psi({ts},{tt})*{g}"));
    j["expansion"] = Value::Array(rows);
    j["violations"] = json!(violations);
    Ok(Outcome::checked(human, j, violations.is_empty()))
}

pub fn gram(s: &Session, lambda: &str, prime: Option<u64>) -> Result<Outcome> {
    let shape = s.shape(lambda)?;
    let alg = s.algebra(shape.size())?;
    let g = gram_matrix(&alg, &shape)?;
    let rank = g.rank(prime)?;
    let field = prime.map_or("Q".to_string(), |p| format!("F_{p}"));
    let mut human = String::new();
    for (t, row) in g.tableaux.iter().zip(&g.entries) {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        human += &format!("{:<20} {}\n", t.to_string(), cells.join(" "));
    }
    human += &format!("rank over {field}: {rank} of {}\n", g.tableaux.len());
    let mut j = s.header(shape.size());
    j["lambda"] = json!(shape.to_string());
    j["tableaux"] = json!(g.tableaux.iter().map(|t| t.to_string()).collect::<Vec<_>>());
    j["entries"] = json!(g.entries.iter().map(|r| r.iter().map(BigInt::to_string).collect::<Vec<_>>()).collect::<Vec<_>>());
    j["field"] = json!(field);
    j["rank"] = json!(rank);
    j["simple_head"] = json!(rank > 0);
    Ok(Outcome::ok(human, j))
}

pub fn simples(s: &Session, prime: Option<u64>) -> Result<Outcome> {
    let n = s.need_n()?;
    let c = classify_simples(&s.algebra(n)?, prime)?;
    let names = |v: &[Multipartition]| v.iter().map(|m| m.to_string()).collect::<Vec<_>>();
    let human = format!(
        "nonzero heads: {}\nKleshchev:     {}\n{}\n",
        names(&c.simples).join(" "),
        names(&c.kleshchev).join(" "),
        if c.agree { "agree" } else { "MISMATCH" }
    );
    let mut j = s.header(n);
    j["simples"] = json!(names(&c.simples));
    j["kleshchev"] = json!(names(&c.kleshchev));
    j["agree"] = json!(c.agree);
    Ok(Outcome::checked(human, j, c.agree))
}

pub fn kleshchev(s: &Session, lambda: &str) -> Result<Outcome> {
    let shape = s.shape(lambda)?;
    let k = is_kleshchev(&shape, &s.charge, s.q())?;
    let mut j = s.header(shape.size());
    j["lambda"] = json!(shape.to_string());
    j["kleshchev"] = json!(k);
    Ok(Outcome::ok(format!("{k}\n"), j))
}

pub fn min_degree_of(s: &Session, alpha: &str) -> Result<Outcome> {
    let block = Block::parse(s.q(), alpha)?;
    let alg = s.algebra(block.size())?;
    let d = min_degree(&alg, &block)?;
    let mut j = s.header(block.size());
    j["alpha"] = json!(block.to_string());
    j["weight"] = json!(alg.weight().to_string());
    j["min_degree"] = json!(d);
    Ok(Outcome::ok(format!("{d}\n"), j))
}

/// Blocks of height `n` over the residues of `q`; `e = 0` has no finite list.
fn blocks_of_size(q: &QuiverData, n: usize) -> Result<Vec<Block>> {
    if q.e() == 0 {
        return Err(KlrError::InvalidInput("give --alpha when e = 0".into()));
    }
    let res = q.residues();
    let mut out = Vec::new();
    let mut seq = vec![0usize; n];
    // non-decreasing index sequences enumerate multisets
    fn rec(q: &QuiverData, res: &[i64], seq: &mut Vec<usize>, at: usize, lo: usize, out: &mut Vec<Block>) {
        if at == seq.len() {
            let s: Vec<i64> = seq.iter().map(|&i| res[i]).collect();
            out.push(Block::of_sequence(q, &s));
            return;
        }
        for i in lo..res.len() {
            seq[at] = i;
            rec(q, res, seq, at + 1, i, out);
        }
    }
    rec(q, &res, &mut seq, 0, 0, &mut out);
    Ok(out)
}

pub fn affine_basis(s: &Session, seq: SequenceKind, seed: Option<&str>, degree: i64, alpha: Option<&str>) -> Result<Outcome> {
    let q = *s.q();
    let seed = match seed {
        Some(t) => Weight::parse(&q, t)?,
        None => Weight::of_multicharge(&q, &s.charge),
    };
    let ws = WeightSequence::new(seq, &q, seed.clone())?;
    let blocks = match alpha {
        Some(a) => vec![Block::parse(&q, a)?],
        None => blocks_of_size(&q, s.need_n()?)?,
    };
    let mut human = String::new();
    let mut reports = Vec::new();
    let mut all_ok = true;
    for b in &blocks {
        let r = affine_basis_check(s.klr.clone(), &ws, b, degree)?;
        all_ok &= r.ok();
        human += &format!(
            "{:<16} degree {:>3}  {} elements on {} monomials, levels {:?}: {}\n",
            r.alpha,
            r.degree,
            r.elements,
            r.monomials,
            r.levels,
            if r.ok() { "ok" } else { "MISMATCH" }
        );
        reports.push(serde_json::to_value(&r).map_err(|e| KlrError::InvalidInput(e.to_string()))?);
    }
    let j = json!({
        "e": q.e(), "sequence": format!("{seq:?}").to_lowercase(), "seed": seed.to_string(),
        "degree": degree, "slices": reports, "ok": all_ok,
    });
    Ok(Outcome::checked(human, j, all_ok))
}

pub fn render(s: &Session, text: &str, cyclotomic: bool) -> Result<Outcome> {
    let (n, c) = s.expression(text)?;
    let mut x = c.to_element(&s.klr, n)?;
    if cyclotomic {
        x = s.algebra(n)?.reduce(&x)?;
    }
    let terms: Vec<Value> = x
        .terms()
        .map(|(m, c)| {
            json!({
                "coefficient": c.to_string(),
                "monomial": m.to_string(),
                "top": m.top(),
                "bottom": m.bottom(),
                "dots": m.ys(),
                "word": m.word(),
                "strands": (1..=n).map(|k| [k, m.perm().apply(k)]).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut j = s.header(n);
    j["terms"] = Value::Array(terms);
    Ok(Outcome::ok(render_element(&x), j))
}

pub fn graded_dim(s: &Session) -> Result<Outcome> {
    let n = s.need_n()?;
    let dims = graded_dimension(&s.algebra(n)?)?;
    let mut human = String::new();
    for (d, k) in &dims {
        human += &format!("degree {d:>3}: {k}\n");
    }
    let mut j = s.header(n);
    j["dimensions"] =
        Value::Object(dims.iter().map(|(d, k)| (d.to_string(), Value::String(k.to_string()))).collect());
    Ok(Outcome::ok(human, j))
}
