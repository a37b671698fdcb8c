//! On-disk cache of slice data: one canonical JSON file per slice key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::affine_algebra::{KLMonomial, Perm};
use crate::error::{KlrError, Result};
use crate::intlinalg::SparseVec;

pub const CACHE_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialRecord {
    pub residues: Vec<String>,
    pub y_exponents: Vec<String>,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiRow {
    pub label: String,
    pub row: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRecord {
    pub version: String,
    pub key: String,
    pub slice_dimension: String,
    pub monomials: Vec<MonomialRecord>,
    pub hnf: Vec<Vec<[String; 2]>>,
    pub psi: Option<Vec<PsiRow>>,
}

fn bad(what: &str) -> KlrError {
    KlrError::Cache(format!("malformed cache record ({what})"))
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| bad(s))
}

pub fn encode_monomial(m: &KLMonomial) -> MonomialRecord {
    MonomialRecord {
        residues: m.top().iter().map(|r| r.to_string()).collect(),
        y_exponents: m.ys().iter().map(|a| a.to_string()).collect(),
        word: m.word().iter().map(|a| a.to_string()).collect(),
    }
}

pub fn decode_monomial(r: &MonomialRecord) -> Result<KLMonomial> {
    let top = r.residues.iter().map(|s| num(s)).collect::<Result<Vec<i64>>>()?;
    let ys = r.y_exponents.iter().map(|s| num(s)).collect::<Result<Vec<u32>>>()?;
    let word = r.word.iter().map(|s| num(s)).collect::<Result<Vec<usize>>>()?;
    let n = top.len();
    if ys.len() != n || word.iter().any(|&a| a == 0 || a >= n) {
        return Err(bad("monomial"));
    }
    let perm = Perm::from_word(n, &word);
    if perm.canonical_word() != word {
        return Err(bad("non-canonical word"));
    }
    Ok(KLMonomial::new(top, ys, perm))
}

pub fn encode_row(v: &[(usize, BigInt)]) -> Vec<[String; 2]> {
    v.iter().map(|(i, c)| [i.to_string(), c.to_string()]).collect()
}

pub fn decode_row(v: &[[String; 2]]) -> Result<SparseVec> {
    v.iter().map(|[i, c]| Ok((num(i)?, num(c)?))).collect()
}

/// A directory of slice records keyed by a digest of their parameters.
#[derive(Clone, Debug)]
pub struct SliceCache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl SliceCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(SliceCache { dir: dir.as_ref().to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn digest(material: &str) -> String {
        hex::encode(Sha256::digest(material.as_bytes()))
    }

    fn path(&self, material: &str) -> PathBuf {
        self.dir.join(format!("{}.json", SliceCache::digest(material)))
    }

    pub fn load(&self, material: &str) -> Result<Option<SliceRecord>> {
        let path = self.path(material);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let rec: SliceRecord =
            serde_json::from_str(&text).map_err(|e| KlrError::Cache(format!("{}: {e}", path.display())))?;
        if rec.version != CACHE_VERSION || rec.key != material {
            return Ok(None);
        }
        Ok(Some(rec))
    }

    /// Writes to a temporary file and renames it into place.
    pub fn store(&self, material: &str, rec: &SliceRecord) -> Result<()> {
        let path = self.path(material);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            SliceCache::digest(material),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let text = serde_json::to_string(rec).map_err(|e| KlrError::Cache(e.to_string()))?;
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}
