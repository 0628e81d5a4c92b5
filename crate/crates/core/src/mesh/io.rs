//! Plain-text mesh format.
//!
//! ```text
//! meshfmt 1
//! points N
//! <idx> <x> <y> <C|B|I>
//! triangles M
//! <idx> <n1> <n2> <n3>
//! h <value>
//! ```
//!
//! Reals are written with 17 significant digits so a write/read cycle is
//! lossless.

use std::fmt::Write as _;

use super::{Mesh, NodeKind};
use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Formats a real with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut s = String::new();
    s.push_str("meshfmt 1\n");
    let _ = writeln!(s, "points {}", mesh.n_points());
    for (i, (p, kind)) in mesh.points.iter().zip(&mesh.kinds).enumerate() {
        let flag = match kind {
            NodeKind::Constant => 'C',
            NodeKind::Boundary => 'B',
            NodeKind::Internal => 'I',
        };
        let _ = writeln!(s, "{i} {} {} {flag}", fmt_real(p.x), fmt_real(p.y));
    }
    let _ = writeln!(s, "triangles {}", mesh.n_elements());
    for (i, t) in mesh.triangles.iter().enumerate() {
        let _ = writeln!(s, "{i} {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(s, "h {}", fmt_real(mesh.h));
    s
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_fields(&mut self) -> Result<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !fields.is_empty() {
                return Ok((i + 1, fields));
            }
        }
        Err(Error::Parse {
            line: 0,
            message: "unexpected end of file".into(),
        })
    }
}

fn parse<T: std::str::FromStr>(line: usize, field: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse '{field}'"),
    })
}

fn expect_header<'a>(lines: &mut Lines<'a>, keyword: &str) -> Result<(usize, &'a str)> {
    let (line, fields) = lines.next_fields()?;
    if fields.len() != 2 || fields[0] != keyword {
        return Err(Error::Parse {
            line,
            message: format!("expected '{keyword} <value>'"),
        });
    }
    Ok((line, fields[1]))
}

pub fn read_mesh(text: &str) -> Result<Mesh> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (line, version) = expect_header(&mut lines, "meshfmt")?;
    if version != "1" {
        return Err(Error::Parse {
            line,
            message: format!("unsupported mesh format version {version}"),
        });
    }
    let (line, n) = expect_header(&mut lines, "points")?;
    let n: usize = parse(line, n)?;
    let mut points = Vec::with_capacity(n);
    let mut kinds = Vec::with_capacity(n);
    for i in 0..n {
        let (line, f) = lines.next_fields()?;
        if f.len() != 4 || parse::<usize>(line, f[0])? != i {
            return Err(Error::Parse {
                line,
                message: format!("expected point record {i}"),
            });
        }
        points.push(Point2::new(parse(line, f[1])?, parse(line, f[2])?));
        kinds.push(match f[3] {
            "C" => NodeKind::Constant,
            "B" => NodeKind::Boundary,
            "I" => NodeKind::Internal,
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown node flag '{other}'"),
                })
            }
        });
    }
    let (line, m) = expect_header(&mut lines, "triangles")?;
    let m: usize = parse(line, m)?;
    let mut triangles = Vec::with_capacity(m);
    for i in 0..m {
        let (line, f) = lines.next_fields()?;
        if f.len() != 4 || parse::<usize>(line, f[0])? != i {
            return Err(Error::Parse {
                line,
                message: format!("expected triangle record {i}"),
            });
        }
        triangles.push([parse(line, f[1])?, parse(line, f[2])?, parse(line, f[3])?]);
    }
    let (line, h) = expect_header(&mut lines, "h")?;
    let h: f64 = parse(line, h)?;
    Mesh::new(points, triangles, kinds, h)
}
