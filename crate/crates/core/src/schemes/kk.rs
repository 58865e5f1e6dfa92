//! Overlay-anchored scheme: spanning-tree fields, an overlay name, and per level a
//! component-parent flag with the path maximum to that level's anchor.

use crate::bits::{gamma_len, BitReader, BitString, CodecError};
use crate::cert::{
    Certificate, EncodingParams, FieldClass, FieldSpec, LabelAssignment, LocalView, ProveError, ProveMode, Reason,
    Scheme, SchemeTag, TamperError, Verdict,
};
use crate::graph::{Weight, WeightedGraph};
use crate::mst::{is_mst, is_spanning_tree};
use crate::overlay::{build_overlay, lcp_depth, name_bits, Flag};
use crate::schemes::st::{check_tree, read_counter, reject_st, StCert};
use crate::schemes::{indexed, read_weight};
use crate::tree::root_at;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub flag: Flag,
    pub m: Weight,
}

/// `levels` has one entry per overlay depth `0..=name.len()`; the encoding relies on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KkCert {
    pub st: StCert,
    pub name: Vec<u32>,
    pub levels: Vec<Level>,
}

impl KkCert {
    /// Placeholder label for selections that are not spanning trees.
    pub fn zeroed() -> Self {
        KkCert { st: StCert { root: 0, dist: 0 }, name: Vec::new(), levels: vec![Level { flag: Flag::Root, m: 0 }] }
    }
}

impl Certificate for KkCert {
    fn encode_into(&self, out: &mut BitString, params: &EncodingParams) {
        self.st.write(out, params);
        out.push_gamma(self.name.len() as u64 + 1).unwrap();
        out.extend_from(&name_bits(&self.name));
        for l in &self.levels {
            out.push_uint(l.flag.code(), 2);
            out.push_uint(l.m, params.wbits);
        }
    }

    fn decode_from(r: &mut BitReader<'_>, params: &EncodingParams) -> Result<Self, CodecError> {
        let st = StCert::read(r, params)?;
        let depth = read_counter(r)? as usize;
        if depth > r.remaining() {
            return Err(CodecError::Truncated);
        }
        let name = (0..depth)
            .map(|_| u32::try_from(r.read_gamma()?).map_err(|_| CodecError::InvalidValue("child number")))
            .collect::<Result<Vec<_>, _>>()?;
        let levels = (0..=depth)
            .map(|_| {
                let flag = Flag::from_code(r.read_uint(2)?).ok_or(CodecError::InvalidValue("flag"))?;
                Ok(Level { flag, m: read_weight(r, params)? })
            })
            .collect::<Result<Vec<_>, CodecError>>()?;
        Ok(KkCert { st, name, levels })
    }

    fn encoded_len(&self, params: &EncodingParams) -> usize {
        self.st.len(params)
            + gamma_len(self.name.len() as u64 + 1)
            + self.name.iter().map(|&k| gamma_len(u64::from(k))).sum::<usize>()
            + self.levels.len() * (2 + params.wbits as usize)
    }

    fn fields(&self) -> Vec<FieldSpec> {
        let mut out = StCert::field_specs().to_vec();
        out.extend((0..self.name.len()).map(|i| FieldSpec::new(format!("name[{i}]"), FieldClass::NameNumber)));
        for i in 0..self.levels.len() {
            out.push(FieldSpec::new(format!("flag[{i}]"), FieldClass::Flag));
            out.push(FieldSpec::new(format!("m[{i}]"), FieldClass::MaxWeight));
        }
        out
    }

    fn field(&self, name: &str) -> Option<u64> {
        if let Some(v) = self.st.get(name) {
            return Some(v);
        }
        if let Some((i, "")) = indexed(name, "name") {
            return self.name.get(i).map(|&k| u64::from(k));
        }
        if let Some((i, "")) = indexed(name, "flag") {
            return self.levels.get(i).map(|l| l.flag.code());
        }
        if let Some((i, "")) = indexed(name, "m") {
            return self.levels.get(i).map(|l| l.m);
        }
        None
    }

    fn set_field(&mut self, name: &str, value: u64) -> Result<(), TamperError> {
        if self.field(name).is_none() {
            return Err(TamperError::UnknownField(name.into()));
        }
        if self.st.set(name, value)? {
            return Ok(());
        }
        let bad = || TamperError::BadValue { field: name.into(), value };
        if let Some((i, _)) = indexed(name, "name") {
            self.name[i] = u32::try_from(value).ok().filter(|&k| k >= 1).ok_or_else(bad)?;
        } else if let Some((i, _)) = indexed(name, "flag") {
            self.levels[i].flag = Flag::from_code(value).ok_or_else(bad)?;
        } else if let Some((i, _)) = indexed(name, "m") {
            self.levels[i].m = value;
        }
        Ok(())
    }
}

/// Roots the selected tree at its centroid, builds the overlay and labels every node.
/// Best-effort mode labels any spanning tree and gives zeroed labels otherwise.
pub fn kk_prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<KkCert>, ProveError> {
    let edges = g.selected_edges();
    if !is_spanning_tree(g, &edges) {
        return match mode {
            ProveMode::Strict if !g.is_connected() => Err(ProveError::Disconnected),
            ProveMode::Strict => Err(ProveError::NotSpanningTree),
            ProveMode::BestEffort => Ok(g.ids().iter().map(|&id| (id, KkCert::zeroed())).collect()),
        };
    }
    if mode == ProveMode::Strict && !is_mst(g, &edges) {
        return Err(ProveError::NotMinimal);
    }
    let first = *g.ids().first().ok_or(ProveError::NotSpanningTree)?;
    let centre = root_at(g, &edges, first)?.centroid(g.ids())?;
    let t = root_at(g, &edges, centre)?;
    let o = build_overlay(&t);
    Ok((0..g.node_count())
        .map(|x| {
            let st = StCert { root: centre, dist: t.depth_of(x) };
            let levels = o.links(x).iter().map(|l| Level { flag: l.flag, m: l.m }).collect();
            (g.id(x), KkCert { st, name: o.name(x).to_vec(), levels })
        })
        .collect())
}

pub fn kk_verify(view: &LocalView<'_, KkCert>) -> Verdict {
    let mut verdict = Verdict::accept();
    let mut faults = Vec::new();
    let links = check_tree(view, |c| &c.st, &mut faults);
    reject_st(&mut verdict, &faults);

    let own = view.cert;
    let r = own.name.len();
    if own.levels.len() != r + 1 {
        verdict.reject(Reason::Levels);
        return verdict;
    }
    verdict.require(own.levels[r] == Level { flag: Flag::Root, m: 0 }, Reason::Levels);

    for i in 0..r {
        let p = match own.levels[i].flag {
            Flag::Root => None,
            Flag::Up => links.parent,
            Flag::Down => {
                let mut not_up = links.children.iter().copied().filter(|&k| {
                    let levels = &view.incident[k].cert.levels;
                    levels.len() > i && levels[i].flag != Flag::Up
                });
                match (not_up.next(), not_up.next()) {
                    (Some(k), None) => Some(k),
                    _ => None,
                }
            }
        };
        let Some(k) = p else {
            verdict.reject(Reason::FlagResolve);
            continue;
        };
        let p = &view.incident[k];
        let Some(theirs) = p.cert.levels.get(i) else {
            verdict.reject(Reason::Prefix);
            continue;
        };
        let prefix_ok = match theirs.flag {
            Flag::Root => p.cert.name == own.name[..i],
            _ => p.cert.name.len() > i && p.cert.name[..i] == own.name[..i],
        };
        verdict.require(prefix_ok, Reason::Prefix);
        verdict.require(own.levels[i].m == p.weight.max(theirs.m), Reason::MaxChain);
    }

    for inc in view.unselected() {
        let d = lcp_depth(&own.name, &inc.cert.name);
        match inc.cert.levels.get(d) {
            Some(theirs) => verdict.require(inc.weight >= own.levels[d].m.max(theirs.m), Reason::CycleProperty),
            None => verdict.reject(Reason::Levels),
        }
    }
    verdict
}

pub struct KkScheme;

impl Scheme for KkScheme {
    type Cert = KkCert;
    const TAG: SchemeTag = SchemeTag::Kk;

    fn prove(g: &WeightedGraph, mode: ProveMode) -> Result<LabelAssignment<KkCert>, ProveError> {
        kk_prove(g, mode)
    }

    fn verify(view: &LocalView<'_, KkCert>) -> Verdict {
        kk_verify(view)
    }
}

/// Bit length of a node's certificate, as a function of its fields.
pub fn kk_bits(params: &EncodingParams, dist: u32, name: &[u32]) -> usize {
    params.idbits as usize
        + gamma_len(u64::from(dist) + 1)
        + gamma_len(name.len() as u64 + 1)
        + name_bits(name).len()
        + (name.len() + 1) * (2 + params.wbits as usize)
}
