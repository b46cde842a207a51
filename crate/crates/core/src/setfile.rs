//! Plain-text point sets.
//!
//! ```text
//! group 4x4
//! # comment
//! 0,1
//! 2,3
//! ```
//!
//! The first meaningful line is `group <spec>` or `box <spec>`; every other
//! non-blank line not starting with `#` is one comma-separated point. Group
//! coordinates are reduced modulo the factors; box coordinates must already
//! lie in the box. Duplicates (after reduction) are rejected.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{GroupSpec, PointSet};
use crate::lifting::BoxedSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetFile {
    Group(PointSet),
    Box(BoxedSet),
}

impl SetFile {
    /// The header spec: the ambient group, or the box dims as a group.
    pub fn header(&self) -> Result<GroupSpec> {
        match self {
            SetFile::Group(s) => Ok(s.ambient().clone()),
            SetFile::Box(b) => GroupSpec::new(b.dims().to_vec()),
        }
    }
}

fn err(line: usize, reason: impl fmt::Display) -> Error {
    Error::SetFile {
        line,
        reason: reason.to_string(),
    }
}

pub fn parse_set_file(text: &str) -> Result<SetFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let (kind, spec) = header.split_once(char::is_whitespace).ok_or_else(|| {
        err(
            hline,
            format!("expected `group <spec>` or `box <spec>`, got {header:?}"),
        )
    })?;
    let spec: GroupSpec = spec.trim().parse().map_err(|e| err(hline, e))?;
    let mut rows = Vec::new();
    for (n, l) in lines {
        let row = l
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| err(n, format!("bad coordinate in {l:?}: {e}")))?;
        if row.len() != spec.dim() {
            return Err(err(
                n,
                format!("expected {} coordinates, got {}", spec.dim(), row.len()),
            ));
        }
        rows.push((n, row));
    }
    match kind {
        "group" => {
            let mut points = Vec::with_capacity(rows.len());
            let mut seen = std::collections::HashMap::new();
            for (n, row) in &rows {
                let g = spec.element(row).map_err(|e| err(*n, e))?;
                if let Some(first) = seen.insert(g.clone(), *n) {
                    return Err(err(
                        *n,
                        format!("duplicate point {g} (first on line {first})"),
                    ));
                }
                points.push(g);
            }
            Ok(SetFile::Group(PointSet::new(spec, points)?))
        }
        "box" => {
            let dims = spec.orders().to_vec();
            let mut seen = std::collections::HashMap::new();
            for (n, row) in &rows {
                if row.iter().zip(&dims).any(|(&x, &m)| x < 0 || x as u64 >= m) {
                    return Err(err(
                        *n,
                        format!("point {l} outside the box {spec}", l = join(row)),
                    ));
                }
                if let Some(first) = seen.insert(row.clone(), *n) {
                    return Err(err(
                        *n,
                        format!("duplicate point {} (first on line {first})", join(row)),
                    ));
                }
            }
            Ok(SetFile::Box(BoxedSet::new(
                dims,
                rows.into_iter().map(|(_, r)| r).collect(),
            )?))
        }
        other => Err(err(hline, format!("unknown header kind {other:?}"))),
    }
}

fn join<T: fmt::Display>(row: &[T]) -> String {
    row.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Canonical text: header, then points in sorted order.
pub fn write_set_file(set: &SetFile) -> String {
    let mut out = String::new();
    match set {
        SetFile::Group(s) => {
            out.push_str(&format!("group {}\n", s.ambient()));
            for p in s {
                out.push_str(&join(p.coords()));
                out.push('\n');
            }
        }
        SetFile::Box(b) => {
            out.push_str(&format!(
                "box {}\n",
                GroupSpec::new(b.dims().to_vec()).expect("positive dims")
            ));
            for p in b.points() {
                out.push_str(&join(p));
                out.push('\n');
            }
        }
    }
    out
}
