//! Binary policy files.
//!
//! ```text
//! offset  size  field
//!      0     8  magic "HRCPOLCY"
//!      8     4  format version, u32 little-endian (currently 1)
//!     12     8  number of states N, u64 little-endian
//!     20    44  the 11 field radices in canonical order, u32 little-endian each
//!     64    32  provenance hash (SHA-256 of the model parameters and tables)
//!     96     N  one decision id (0..=7) per state index
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Decision, StateSpace, NUM_FIELDS};

pub const MAGIC: &[u8; 8] = b"HRCPOLCY";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 96;

/// Identifies the model a policy was solved for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub radices: [u32; NUM_FIELDS],
    pub hash: [u8; 32],
}

impl Provenance {
    pub fn new(space: &StateSpace, hash: [u8; 32]) -> Self {
        let mut radices = [0u32; NUM_FIELDS];
        for (r, &s) in radices.iter_mut().zip(space.radices()) {
            *r = s as u32;
        }
        Self { radices, hash }
    }

    pub fn states(&self) -> usize {
        self.radices.iter().map(|&r| r as usize).product()
    }

    pub fn hash_hex(&self) -> String {
        self.hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Optimal decision per state index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    pub actions: Vec<Decision>,
    pub provenance: Provenance,
}

impl Policy {
    pub fn new(actions: Vec<Decision>, provenance: Provenance) -> Result<Self> {
        if actions.len() != provenance.states() {
            return Err(Error::Arity {
                expected: provenance.states(),
                found: actions.len(),
            });
        }
        Ok(Self {
            actions,
            provenance,
        })
    }

    pub fn action(&self, index: usize) -> Decision {
        self.actions[index]
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.actions.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.actions.len() as u64).to_le_bytes());
        for r in self.provenance.radices {
            out.extend_from_slice(&r.to_le_bytes());
        }
        out.extend_from_slice(&self.provenance.hash);
        out.extend(self.actions.iter().map(|d| d.id()));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let corrupt = |msg: &str| Error::CorruptPolicy(msg.to_string());
        if bytes.len() < HEADER_LEN {
            return Err(corrupt("file shorter than the header"));
        }
        if &bytes[..8] != MAGIC {
            return Err(corrupt("bad magic bytes"));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != VERSION {
            return Err(Error::CorruptPolicy(format!(
                "unsupported version {version}"
            )));
        }
        let n = u64::from_le_bytes(bytes[12..20].try_into().unwrap()) as usize;
        let mut radices = [0u32; NUM_FIELDS];
        for (i, r) in radices.iter_mut().enumerate() {
            let at = 20 + 4 * i;
            *r = u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        }
        let hash: [u8; 32] = bytes[64..96].try_into().unwrap();
        let provenance = Provenance { radices, hash };
        if provenance.states() != n {
            return Err(corrupt("state count does not match the radices"));
        }
        let body = &bytes[HEADER_LEN..];
        if body.len() != n {
            return Err(Error::CorruptPolicy(format!(
                "expected {n} action bytes, found {}",
                body.len()
            )));
        }
        let actions = body
            .iter()
            .map(|&b| Decision::from_id(b))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| corrupt("invalid decision id"))?;
        Ok(Self {
            actions,
            provenance,
        })
    }

    /// Writes to a temporary sibling and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file_name = path.file_name().ok_or_else(|| {
            Error::invalid("out", format!("{} is not a file path", path.display()))
        })?;
        let mut tmp_name = file_name.to_os_string();
        tmp_name.push(".tmp");
        let tmp = path.with_file_name(tmp_name);
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&self.to_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, path)
        };
        write().map_err(|e| {
            let _ = fs::remove_file(&tmp);
            Error::io(path, e)
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }

    /// Loads a policy and checks it was solved for the `expected` model.
    pub fn load_for(path: &Path, expected: &Provenance) -> Result<Self> {
        let policy = Self::load(path)?;
        if policy.provenance.radices != expected.radices {
            return Err(Error::ProvenanceMismatch(format!(
                "policy radices {:?}, model radices {:?}",
                policy.provenance.radices, expected.radices
            )));
        }
        if policy.provenance.hash != expected.hash {
            return Err(Error::ProvenanceMismatch(format!(
                "policy hash {}, model hash {}",
                policy.provenance.hash_hex(),
                expected.hash_hex()
            )));
        }
        Ok(policy)
    }
}
