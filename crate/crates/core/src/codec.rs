//! Sketch files.
//!
//! Binary layout (all integers little-endian `u64` unless noted):
//!
//! ```text
//! header   "DSKT" | version: u16 | scheme: u8 | 0u8 | count
//! tz       owner | k | k × (pivot node, pivot dist) | b | b × (node, level, dist)
//! slack3   owner | t | t × (member, dist)
//! cdg      owner | nearest | nearest dist | tz record of the nearest member
//! gd       owner | l | l × (eps numer | eps denom | k | cdg record)
//! ```
//!
//! Scheme tags: 1 = tz, 2 = slack3, 3 = cdg, 4 = gd. The JSON mirror is the
//! serde form of [`SketchSet`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eps::Eps;
use crate::gd::{GdLevel, GdSketch};
use crate::graph::{Dist, NodeId};
use crate::label::{BunchEntry, Pivot, TzLabel};
use crate::query::{cdg_estimate, gd_estimate, slack3_estimate, tz_estimate, QueryError};
use crate::slack::{CdgSketch, SlackSketch3};

pub const MAGIC: &[u8; 4] = b"DSKT";
pub const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("not a sketch file (bad magic)")]
    BadMagic,
    #[error("unsupported sketch file version {0}")]
    UnsupportedVersion(u16),
    #[error("unknown scheme tag {0}")]
    UnknownScheme(u8),
    #[error("sketch file truncated")]
    Truncated,
    #[error("{0} trailing bytes after the last record")]
    TrailingBytes(usize),
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// All sketches of one build, indexed by owner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", content = "sketches", rename_all = "snake_case")]
pub enum SketchSet {
    Tz(Vec<TzLabel>),
    Slack3(Vec<SlackSketch3>),
    Cdg(Vec<CdgSketch>),
    Gd(Vec<GdSketch>),
}

impl SketchSet {
    pub fn scheme(&self) -> &'static str {
        match self {
            SketchSet::Tz(_) => "tz",
            SketchSet::Slack3(_) => "slack3",
            SketchSet::Cdg(_) => "cdg",
            SketchSet::Gd(_) => "gd",
        }
    }

    fn tag(&self) -> u8 {
        match self {
            SketchSet::Tz(_) => 1,
            SketchSet::Slack3(_) => 2,
            SketchSet::Cdg(_) => 3,
            SketchSet::Gd(_) => 4,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SketchSet::Tz(s) => s.len(),
            SketchSet::Slack3(s) => s.len(),
            SketchSet::Cdg(s) => s.len(),
            SketchSet::Gd(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Size of node `u`'s sketch in words.
    pub fn words(&self, u: NodeId) -> usize {
        match self {
            SketchSet::Tz(s) => s[u].words(),
            SketchSet::Slack3(s) => s[u].words(),
            SketchSet::Cdg(s) => s[u].words(),
            SketchSet::Gd(s) => s[u].words(),
        }
    }

    pub fn estimate(&self, u: NodeId, v: NodeId) -> Result<Dist, QueryError> {
        match self {
            SketchSet::Tz(s) => tz_estimate(&s[u], &s[v]),
            SketchSet::Slack3(s) => slack3_estimate(&s[u], &s[v]),
            SketchSet::Cdg(s) => cdg_estimate(&s[u], &s[v]),
            SketchSet::Gd(s) => gd_estimate(&s[u], &s[v]),
        }
    }

    /// Owners must be `0..len` in order; labels must be well formed.
    pub fn check(&self) -> Result<(), String> {
        let owners: Vec<NodeId> = match self {
            SketchSet::Tz(s) => s.iter().map(|x| x.owner).collect(),
            SketchSet::Slack3(s) => s.iter().map(|x| x.owner).collect(),
            SketchSet::Cdg(s) => s.iter().map(|x| x.owner).collect(),
            SketchSet::Gd(s) => s.iter().map(|x| x.owner).collect(),
        };
        if let Some(u) = owners.iter().enumerate().position(|(i, &o)| i != o) {
            return Err(format!("sketch {u} belongs to node {}", owners[u]));
        }
        match self {
            SketchSet::Tz(s) => s.iter().try_for_each(TzLabel::check),
            SketchSet::Slack3(_) => Ok(()),
            SketchSet::Cdg(s) => s.iter().try_for_each(check_cdg),
            SketchSet::Gd(s) => s.iter().flat_map(|g| &g.levels).try_for_each(|l| check_cdg(&l.sketch)),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(self.tag());
        out.push(0);
        let mut w = Writer(out);
        w.put(self.len() as u64);
        match self {
            SketchSet::Tz(s) => s.iter().for_each(|l| w.tz(l)),
            SketchSet::Slack3(s) => s.iter().for_each(|x| w.slack3(x)),
            SketchSet::Cdg(s) => s.iter().for_each(|x| w.cdg(x)),
            SketchSet::Gd(s) => s.iter().for_each(|x| w.gd(x)),
        }
        w.0
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() < 8 || &bytes[..4] != MAGIC {
            return Err(CodecError::BadMagic);
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(CodecError::UnsupportedVersion(version));
        }
        let tag = bytes[6];
        let mut r = Reader { buf: &bytes[8..] };
        let count = r.len()?;
        let set = match tag {
            1 => SketchSet::Tz((0..count).map(|_| r.tz()).collect::<Result<_, _>>()?),
            2 => SketchSet::Slack3((0..count).map(|_| r.slack3()).collect::<Result<_, _>>()?),
            3 => SketchSet::Cdg((0..count).map(|_| r.cdg()).collect::<Result<_, _>>()?),
            4 => SketchSet::Gd((0..count).map(|_| r.gd()).collect::<Result<_, _>>()?),
            t => return Err(CodecError::UnknownScheme(t)),
        };
        if !r.buf.is_empty() {
            return Err(CodecError::TrailingBytes(r.buf.len()));
        }
        Ok(set)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sketches serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CodecError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_cdg(c: &CdgSketch) -> Result<(), String> {
    if c.net_label.owner != c.nearest {
        return Err(format!("node {} adopted the label of {} instead of {}", c.owner, c.net_label.owner, c.nearest));
    }
    c.net_label.check()
}

struct Writer(Vec<u8>);

impl Writer {
    fn put(&mut self, x: u64) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }

    fn tz(&mut self, l: &TzLabel) {
        self.put(l.owner as u64);
        self.put(l.k as u64);
        for p in &l.pivots {
            self.put(p.node as u64);
            self.put(p.dist);
        }
        self.put(l.bunch.len() as u64);
        for e in &l.bunch {
            self.put(e.node as u64);
            self.put(e.level as u64);
            self.put(e.dist);
        }
    }

    fn slack3(&mut self, s: &SlackSketch3) {
        self.put(s.owner as u64);
        self.put(s.table.len() as u64);
        for &(m, d) in &s.table {
            self.put(m as u64);
            self.put(d);
        }
    }

    fn cdg(&mut self, c: &CdgSketch) {
        self.put(c.owner as u64);
        self.put(c.nearest as u64);
        self.put(c.nearest_dist);
        self.tz(&c.net_label);
    }

    fn gd(&mut self, g: &GdSketch) {
        self.put(g.owner as u64);
        self.put(g.levels.len() as u64);
        for l in &g.levels {
            self.put(l.eps.numer());
            self.put(l.eps.denom());
            self.put(l.k as u64);
            self.cdg(&l.sketch);
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl Reader<'_> {
    fn get(&mut self) -> Result<u64, CodecError> {
        if self.buf.len() < 8 {
            return Err(CodecError::Truncated);
        }
        let (head, rest) = self.buf.split_at(8);
        self.buf = rest;
        Ok(u64::from_le_bytes(head.try_into().unwrap()))
    }

    fn id(&mut self) -> Result<usize, CodecError> {
        usize::try_from(self.get()?).map_err(|_| CodecError::Malformed("node ID overflows".into()))
    }

    /// A count of records that follow; bounded by the bytes left so that a
    /// corrupt length cannot trigger a huge allocation.
    fn len(&mut self) -> Result<usize, CodecError> {
        let n = self.id()?;
        if n > self.buf.len() / 8 {
            return Err(CodecError::Truncated);
        }
        Ok(n)
    }

    fn tz(&mut self) -> Result<TzLabel, CodecError> {
        let owner = self.id()?;
        let k = self.len()?;
        let pivots = (0..k)
            .map(|_| Ok(Pivot { node: self.id()?, dist: self.get()? }))
            .collect::<Result<_, CodecError>>()?;
        let b = self.len()?;
        let bunch = (0..b)
            .map(|_| Ok(BunchEntry { node: self.id()?, level: self.id()?, dist: self.get()? }))
            .collect::<Result<_, CodecError>>()?;
        Ok(TzLabel { owner, k, pivots, bunch })
    }

    fn slack3(&mut self) -> Result<SlackSketch3, CodecError> {
        let owner = self.id()?;
        let t = self.len()?;
        let table = (0..t).map(|_| Ok((self.id()?, self.get()?))).collect::<Result<_, CodecError>>()?;
        Ok(SlackSketch3 { owner, table })
    }

    fn cdg(&mut self) -> Result<CdgSketch, CodecError> {
        Ok(CdgSketch { owner: self.id()?, nearest: self.id()?, nearest_dist: self.get()?, net_label: self.tz()? })
    }

    fn gd(&mut self) -> Result<GdSketch, CodecError> {
        let owner = self.id()?;
        let l = self.len()?;
        let levels = (0..l)
            .map(|_| {
                let (num, den) = (self.get()?, self.get()?);
                let eps = Eps::new(num, den).map_err(|e| CodecError::Malformed(e.to_string()))?;
                Ok(GdLevel { eps, k: self.id()?, sketch: self.cdg()? })
            })
            .collect::<Result<_, CodecError>>()?;
        Ok(GdSketch { owner, levels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(owner: NodeId) -> TzLabel {
        TzLabel {
            owner,
            k: 2,
            pivots: vec![Pivot { node: owner, dist: 0 }, Pivot { node: 3, dist: 4 }],
            bunch: vec![BunchEntry { node: 3, level: 1, dist: 4 }, BunchEntry { node: owner, level: 0, dist: 0 }],
        }
    }

    fn samples() -> Vec<SketchSet> {
        let cdg = |owner| CdgSketch { owner, nearest: 1, nearest_dist: 7, net_label: label(1) };
        vec![
            SketchSet::Tz(vec![label(0), label(1)]),
            SketchSet::Slack3(vec![SlackSketch3 { owner: 0, table: vec![(0, 0), (5, 9)] }]),
            SketchSet::Cdg(vec![cdg(0), cdg(1)]),
            SketchSet::Gd(vec![GdSketch {
                owner: 0,
                levels: vec![GdLevel { eps: Eps::new(1, 2).unwrap(), k: 2, sketch: cdg(0) }],
            }]),
        ]
    }

    #[test]
    fn binary_and_json_roundtrip() {
        for s in samples() {
            assert_eq!(SketchSet::decode(&s.encode()).unwrap(), s);
            assert_eq!(SketchSet::from_json(&s.to_json()).unwrap(), s);
        }
    }

    #[test]
    fn header_layout() {
        let bytes = SketchSet::Slack3(vec![]).encode();
        assert_eq!(bytes, [b'D', b'S', b'K', b'T', 1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let good = samples()[0].encode();
        assert!(matches!(SketchSet::decode(&good[..good.len() - 3]), Err(CodecError::Truncated)));
        let mut extra = good.clone();
        extra.push(0);
        assert!(matches!(SketchSet::decode(&extra), Err(CodecError::TrailingBytes(1))));
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(SketchSet::decode(&bad), Err(CodecError::BadMagic)));
        let mut tag = good;
        tag[6] = 9;
        assert!(matches!(SketchSet::decode(&tag), Err(CodecError::UnknownScheme(9))));
    }
}
