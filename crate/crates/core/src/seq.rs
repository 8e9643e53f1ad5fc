//! Update sequences and their line-oriented text format.
//!
//! ```text
//! # comment
//! iv 0          insert vertex
//! dv 0          delete vertex
//! ie 0 1        insert edge, orientation chosen by the insert rule
//! ied 0 1       insert edge oriented 0 -> 1
//! de 0 1        delete edge
//! q 0 1         adjacency query
//! q 0           value query at a vertex
//! val 0 -3      set value
//! ```

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UpdateOp {
    InsertVertex(VertexId),
    DeleteVertex(VertexId),
    InsertEdge(VertexId, VertexId),
    InsertDirected(VertexId, VertexId),
    DeleteEdge(VertexId, VertexId),
    /// `Query(u, Some(v))` asks whether `{u, v}` is an edge; `Query(v, None)`
    /// asks for the aggregate at `v`.
    Query(VertexId, Option<VertexId>),
    SetValue(VertexId, i64),
}

impl UpdateOp {
    pub fn is_edge_insert(&self) -> bool {
        matches!(self, UpdateOp::InsertEdge(..) | UpdateOp::InsertDirected(..))
    }

    pub fn is_edge_update(&self) -> bool {
        matches!(
            self,
            UpdateOp::InsertEdge(..) | UpdateOp::InsertDirected(..) | UpdateOp::DeleteEdge(..)
        )
    }

    /// The vertices this op names.
    pub fn endpoints(&self) -> Vec<VertexId> {
        match *self {
            UpdateOp::InsertVertex(v) | UpdateOp::DeleteVertex(v) | UpdateOp::SetValue(v, _) => {
                vec![v]
            }
            UpdateOp::Query(u, None) => vec![u],
            UpdateOp::Query(u, Some(v))
            | UpdateOp::InsertEdge(u, v)
            | UpdateOp::InsertDirected(u, v)
            | UpdateOp::DeleteEdge(u, v) => vec![u, v],
        }
    }
}

impl fmt::Display for UpdateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateOp::InsertVertex(v) => write!(f, "iv {v}"),
            UpdateOp::DeleteVertex(v) => write!(f, "dv {v}"),
            UpdateOp::InsertEdge(u, v) => write!(f, "ie {u} {v}"),
            UpdateOp::InsertDirected(u, v) => write!(f, "ied {u} {v}"),
            UpdateOp::DeleteEdge(u, v) => write!(f, "de {u} {v}"),
            UpdateOp::Query(u, Some(v)) => write!(f, "q {u} {v}"),
            UpdateOp::Query(u, None) => write!(f, "q {u}"),
            UpdateOp::SetValue(v, x) => write!(f, "val {v} {x}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateSequence {
    pub ops: Vec<UpdateOp>,
}

impl UpdateSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, op: UpdateOp) {
        self.ops.push(op);
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, UpdateOp> {
        self.ops.iter()
    }

    pub fn extend(&mut self, other: &UpdateSequence) {
        self.ops.extend_from_slice(&other.ops);
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            ops.push(parse_line(line).map_err(|msg| Error::Parse { line: i + 1, msg })?);
        }
        Ok(UpdateSequence { ops })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.ops.len() * 10);
        for op in &self.ops {
            s.push_str(&op.to_string());
            s.push('\n');
        }
        s
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

impl FromIterator<UpdateOp> for UpdateSequence {
    fn from_iter<I: IntoIterator<Item = UpdateOp>>(iter: I) -> Self {
        UpdateSequence {
            ops: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a UpdateSequence {
    type Item = &'a UpdateOp;
    type IntoIter = std::slice::Iter<'a, UpdateOp>;
    fn into_iter(self) -> Self::IntoIter {
        self.ops.iter()
    }
}

fn parse_line(line: &str) -> std::result::Result<UpdateOp, String> {
    let mut parts = line.split_whitespace();
    let kw = parts.next().ok_or("empty line")?;
    let args: Vec<&str> = parts.collect();
    let id = |k: usize| -> std::result::Result<VertexId, String> {
        let s = args.get(k).ok_or_else(|| format!("`{kw}` needs more operands"))?;
        s.parse::<u32>()
            .map(VertexId)
            .map_err(|_| format!("bad vertex id `{s}`"))
    };
    let arity = |want: &[usize]| -> std::result::Result<(), String> {
        if want.contains(&args.len()) {
            Ok(())
        } else {
            Err(format!("`{kw}` takes {want:?} operands, got {}", args.len()))
        }
    };
    match kw {
        "iv" => {
            arity(&[1])?;
            Ok(UpdateOp::InsertVertex(id(0)?))
        }
        "dv" => {
            arity(&[1])?;
            Ok(UpdateOp::DeleteVertex(id(0)?))
        }
        "ie" => {
            arity(&[2])?;
            Ok(UpdateOp::InsertEdge(id(0)?, id(1)?))
        }
        "ied" => {
            arity(&[2])?;
            Ok(UpdateOp::InsertDirected(id(0)?, id(1)?))
        }
        "de" => {
            arity(&[2])?;
            Ok(UpdateOp::DeleteEdge(id(0)?, id(1)?))
        }
        "q" => {
            arity(&[1, 2])?;
            let v = if args.len() == 2 { Some(id(1)?) } else { None };
            Ok(UpdateOp::Query(id(0)?, v))
        }
        "val" => {
            arity(&[2])?;
            let x = args[1]
                .parse::<i64>()
                .map_err(|_| format!("bad value `{}`", args[1]))?;
            Ok(UpdateOp::SetValue(id(0)?, x))
        }
        other => Err(format!("unknown op `{other}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "# header\niv 0\niv 1\nie 0 1\nied 1 0\nq 0 1\nq 0\nval 1 -7\nde 0 1\ndv 1\n";
        let seq = UpdateSequence::parse(text).unwrap();
        assert_eq!(seq.len(), 9);
        assert_eq!(seq.ops[6], UpdateOp::SetValue(VertexId(1), -7));
        let again = UpdateSequence::parse(&seq.to_text()).unwrap();
        assert_eq!(seq, again);
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = UpdateSequence::parse("iv 0\n\nie 0\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e:?}"),
        }
        assert!(UpdateSequence::parse("zz 1").is_err());
        assert!(UpdateSequence::parse("iv -1").is_err());
    }

    #[test]
    fn trailing_comments_ignored() {
        let seq = UpdateSequence::parse("iv 3 # third\n   # only comment\n").unwrap();
        assert_eq!(seq.ops, vec![UpdateOp::InsertVertex(VertexId(3))]);
    }
}
