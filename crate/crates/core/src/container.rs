//! The on-disk container for compressed distributions.
//!
//! ```text
//! magic        4 bytes   "PDZ1"
//! method       1 byte    0x01 tree, 0x02 refine, 0x03 sparse, 0x04 sparse-queryable
//! n            u64 LE
//! params                 refine: k as u16 LE
//!                        sparse, sparse-queryable: c_num, c_den, t as u64 LE each
//! payload_bits u64 LE
//! payload                bits packed most significant first, zero padded to a byte
//! checksum     u32 LE    CRC-32 of every preceding byte
//! ```
//!
//! `payload_bits` must equal the exact size of the method's payload
//! (`2n - 2`, `kn - 2`, `t (floor(log2 n) + 1)` or
//! `t (floor(log2 n) + floor(log2(n)/(c+1)) + 2)`); anything else is treated
//! as corruption.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::refine::RefinePayload;
use crate::sparse::{build_query_table, max_heavy, SparsePayload, SparseQueryTable, Sparsity};
use crate::treecode::{decode_tree, TreePayload};

pub const MAGIC: &[u8; 4] = b"PDZ1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Method {
    Tree = 1,
    Refine = 2,
    Sparse = 3,
    SparseQueryable = 4,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Tree => "tree",
            Method::Refine => "refine",
            Method::Sparse => "sparse",
            Method::SparseQueryable => "sparse-queryable",
        }
    }

    fn from_byte(b: u8) -> Option<Self> {
        Some(match b {
            1 => Method::Tree,
            2 => Method::Refine,
            3 => Method::Sparse,
            4 => Method::SparseQueryable,
            _ => return None,
        })
    }
}

/// A compressed distribution together with the parameters needed to read it back.
#[derive(Clone, Debug, PartialEq)]
pub enum Container {
    Tree(TreePayload),
    Refine(RefinePayload),
    Sparse(SparsePayload),
    SparseQueryable(SparseQueryTable),
}

impl Container {
    pub fn method(&self) -> Method {
        match self {
            Container::Tree(_) => Method::Tree,
            Container::Refine(_) => Method::Refine,
            Container::Sparse(_) => Method::Sparse,
            Container::SparseQueryable(_) => Method::SparseQueryable,
        }
    }

    /// Number of symbols `n`.
    pub fn leaf_count(&self) -> u64 {
        match self {
            Container::Tree(p) => p.leaf_count() as u64,
            Container::Refine(p) => p.leaf_count() as u64,
            Container::Sparse(p) => p.n(),
            Container::SparseQueryable(t) => t.n(),
        }
    }

    pub fn payload_bits(&self) -> BitVec {
        match self {
            Container::Tree(p) => p.bits().clone(),
            Container::Refine(p) => p.to_bits(),
            Container::Sparse(p) => p.to_bits(),
            Container::SparseQueryable(t) => t.to_bits(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(self.method() as u8);
        out.extend_from_slice(&self.leaf_count().to_le_bytes());
        match self {
            Container::Tree(_) => {}
            Container::Refine(p) => {
                let k = u16::try_from(p.k()).expect("k fits in 16 bits");
                out.extend_from_slice(&k.to_le_bytes());
            }
            Container::Sparse(p) => push_sparse_params(&mut out, p.c(), p.t()),
            Container::SparseQueryable(t) => push_sparse_params(&mut out, t.c(), t.t()),
        }
        let bits = self.payload_bits();
        out.extend_from_slice(&(bits.len() as u64).to_le_bytes());
        out.extend_from_slice(&bits.to_bytes());
        let checksum = crc32fast::hash(&out);
        out.extend_from_slice(&checksum.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut reader = Reader { bytes, at: 0 };
        if reader.take(4)? != MAGIC {
            return Err(Error::Corrupt("bad magic".into()));
        }
        let method = Method::from_byte(reader.take(1)?[0])
            .ok_or_else(|| Error::Corrupt("unknown method".into()))?;
        let n = reader.u64()?;
        if n == 0 {
            return Err(Error::Corrupt("zero symbols".into()));
        }
        let params = match method {
            Method::Tree => Params::None,
            Method::Refine => Params::Refine {
                k: u32::from(u16::from_le_bytes(reader.take(2)?.try_into().unwrap())),
            },
            Method::Sparse | Method::SparseQueryable => Params::Sparse {
                c_num: reader.u64()?,
                c_den: reader.u64()?,
                t: reader.u64()?,
            },
        };
        let bit_len = reader.u64()?;
        let byte_len = usize::try_from(bit_len.div_ceil(8))
            .map_err(|_| Error::Corrupt("payload length overflows".into()))?;
        let payload = reader.take(byte_len)?;
        let body_len = reader.at;
        let stored = u32::from_le_bytes(reader.take(4)?.try_into().unwrap());
        if reader.at != bytes.len() {
            return Err(Error::Corrupt("trailing bytes after checksum".into()));
        }
        if crc32fast::hash(&bytes[..body_len]) != stored {
            return Err(Error::Corrupt("checksum mismatch".into()));
        }

        let expected = expected_bits(method, n, &params)?;
        if bit_len != expected {
            return Err(Error::Corrupt(format!(
                "{} payload has {bit_len} bits, expected {expected}",
                method.name()
            )));
        }
        let bits = BitVec::from_bytes(payload, bit_len as usize)
            .ok_or_else(|| Error::Corrupt("nonzero padding bits".into()))?;
        let n_usize = usize::try_from(n).map_err(|_| Error::Corrupt("n overflows".into()))?;

        let container = (|| -> Result<Self> {
            Ok(match (method, params) {
            (Method::Tree, _) => {
                let payload = TreePayload::from_bits(bits);
                decode_tree(&payload)?;
                Container::Tree(payload)
            }
            (Method::Refine, Params::Refine { k }) => {
                let payload = RefinePayload::from_bits(k, n_usize, &bits)?;
                decode_tree(payload.base())?;
                Container::Refine(payload)
            }
            (Method::Sparse, Params::Sparse { c_num, c_den, t }) => {
                Container::Sparse(SparsePayload::from_bits(n, Sparsity::new(c_num, c_den)?, t, &bits)?)
            }
            (Method::SparseQueryable, Params::Sparse { c_num, c_den, t }) => Container::SparseQueryable(
                SparseQueryTable::from_bits(n, Sparsity::new(c_num, c_den)?, t, &bits)?,
            ),
            _ => unreachable!("params are read according to the method"),
            })
        })();
        container.map_err(|e| match e {
            Error::Corrupt(_) => e,
            other => Error::Corrupt(other.to_string()),
        })
    }

    /// Switches a sparse payload to its queryable form; other methods are returned unchanged.
    pub fn queryable(self) -> Self {
        match self {
            Container::Sparse(p) => Container::SparseQueryable(build_query_table(&p)),
            other => other,
        }
    }
}

enum Params {
    None,
    Refine { k: u32 },
    Sparse { c_num: u64, c_den: u64, t: u64 },
}

fn expected_bits(method: Method, n: u64, params: &Params) -> Result<u64> {
    use crate::sparse::{index_width, rank_width};
    let bits = match (method, params) {
        (Method::Tree, _) => 2 * n - 2,
        (Method::Refine, Params::Refine { k }) => {
            if *k < 2 {
                return Err(Error::Corrupt(format!("refinement parameter k = {k}")));
            }
            (*k as u64).checked_mul(n).map(|b| b - 2).ok_or_else(|| Error::Corrupt("size overflows".into()))?
        }
        (_, Params::Sparse { c_num, c_den, t }) => {
            let c = Sparsity::new(*c_num, *c_den).map_err(|e| Error::Corrupt(e.to_string()))?;
            if *t > max_heavy(n, c) {
                return Err(Error::Corrupt(format!("{t} heavy symbols exceed the bound for n = {n}")));
            }
            let width = match method {
                Method::Sparse => index_width(n),
                _ => index_width(n) + rank_width(n, c),
            };
            t * width as u64
        }
        _ => unreachable!(),
    };
    Ok(bits)
}

fn push_sparse_params(out: &mut Vec<u8>, c: Sparsity, t: u64) {
    out.extend_from_slice(&c.num().to_le_bytes());
    out.extend_from_slice(&c.den().to_le_bytes());
    out.extend_from_slice(&t.to_le_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.at.checked_add(len).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Corrupt("truncated file".into()))?;
        let slice = &self.bytes[self.at..end];
        self.at = end;
        Ok(slice)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}
