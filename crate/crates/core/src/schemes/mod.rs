//! Provers and verifiers, one module per scheme.

pub mod ancestors;
pub mod boruvka;
pub mod kk;
pub mod kruskal;
pub mod st;
pub mod universal;

use crate::bits::{BitReader, BitString, CodecError};
use crate::cert::EncodingParams;
use crate::graph::{ordered, EdgeKey, NodeId, Weight};

/// An edge named by its endpoints and weight, as written inside certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ListedEdge {
    pub lo: NodeId,
    pub hi: NodeId,
    pub w: Weight,
}

impl ListedEdge {
    pub fn new(a: NodeId, b: NodeId, w: Weight) -> Self {
        let (lo, hi) = ordered(a, b);
        ListedEdge { lo, hi, w }
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey { w: self.w, lo: self.lo, hi: self.hi }
    }

    pub fn touches(&self, id: NodeId) -> bool {
        self.lo == id || self.hi == id
    }

    pub(crate) fn write(&self, out: &mut BitString, params: &EncodingParams) {
        out.push_uint(u64::from(self.lo), params.idbits);
        out.push_uint(u64::from(self.hi), params.idbits);
        out.push_uint(self.w, params.wbits);
    }

    pub(crate) fn read(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<Self, CodecError> {
        let lo = st::read_id(r, params)?;
        let hi = st::read_id(r, params)?;
        let w = read_weight(r, params)?;
        Ok(ListedEdge { lo, hi, w })
    }

    pub(crate) fn bits(params: &EncodingParams) -> usize {
        2 * params.idbits as usize + params.wbits as usize
    }

    pub(crate) fn get(&self, attr: &str) -> Option<u64> {
        match attr {
            "lo" => Some(u64::from(self.lo)),
            "hi" => Some(u64::from(self.hi)),
            "w" => Some(self.w),
            _ => None,
        }
    }

    pub(crate) fn set(&mut self, attr: &str, value: u64) -> Option<()> {
        match attr {
            "lo" => self.lo = NodeId::try_from(value).ok()?,
            "hi" => self.hi = NodeId::try_from(value).ok()?,
            "w" => self.w = value,
            _ => return None,
        }
        Some(())
    }
}

pub(crate) fn read_weight(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<Weight, CodecError> {
    r.read_uint(params.wbits)
}

/// Splits `prefix[<i>]<rest>` into `(i, rest)`.
pub(crate) fn indexed<'a>(name: &'a str, prefix: &str) -> Option<(usize, &'a str)> {
    let rest = name.strip_prefix(prefix)?.strip_prefix('[')?;
    let (i, rest) = rest.split_once(']')?;
    Some((i.parse().ok()?, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexed_selectors() {
        assert_eq!(indexed("m[3]", "m"), Some((3, "")));
        assert_eq!(indexed("edge[12].w", "edge"), Some((12, ".w")));
        assert_eq!(indexed("edge[x].w", "edge"), None);
        assert_eq!(indexed("mm[1]", "m"), None);
    }
}
