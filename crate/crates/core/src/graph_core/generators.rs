//! Built-in graph families.

use super::graph::{Graph, VertexId};
use crate::error::{Error, Result};
use std::str::FromStr;

/// How the horizon of a generated graph is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HorizonSpec {
    /// The family's natural boundary: path endpoints, outer ring of a grid,
    /// outer faces of a box, leaves of a star. Cycles and tori have none.
    Boundary,
    List(Vec<VertexId>),
    None,
}

impl FromStr for HorizonSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boundary" => Ok(HorizonSpec::Boundary),
            "none" => Ok(HorizonSpec::None),
            _ => {
                let body = s.strip_prefix("list:").unwrap_or(s);
                body.split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.trim().parse().map_err(|_| Error::Parse {
                            line: 0,
                            message: format!("bad horizon vertex {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(HorizonSpec::List)
            }
        }
    }
}

/// A generator family with its size parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Path on `L` vertices.
    Path(usize),
    /// Cycle on `L` vertices.
    Cycle(usize),
    Grid {
        width: usize,
        height: usize,
        torus: bool,
    },
    Box3d {
        width: usize,
        height: usize,
        depth: usize,
    },
    /// Star with `K` leaves; vertex 0 is the centre.
    Star(usize),
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `path5`, `path:5`, `cycle 6`, `grid:3x3`, `grid:4x4:torus`,
    /// `box3d:3x3x3`, `star3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            message: format!("unrecognised graph family {s:?}"),
        };
        let lower = s.trim().to_ascii_lowercase();
        let name = ["box3d", "path", "cycle", "grid", "star"]
            .into_iter()
            .find(|name| lower.starts_with(name))
            .ok_or_else(bad)?;
        let rest = &lower[name.len()..];
        let torus = rest.contains("torus");
        let nums: Vec<usize> = rest
            .split(|c: char| !c.is_ascii_digit())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (name, nums.as_slice()) {
            ("path", [l]) => Ok(Family::Path(*l)),
            ("cycle", [l]) => Ok(Family::Cycle(*l)),
            ("grid", [w, h]) => Ok(Family::Grid {
                width: *w,
                height: *h,
                torus,
            }),
            ("box3d", [w, h, d]) => Ok(Family::Box3d {
                width: *w,
                height: *h,
                depth: *d,
            }),
            ("star", [k]) => Ok(Family::Star(*k)),
            _ => Err(bad()),
        }
    }
}

impl Family {
    pub fn build(&self, horizon: &HorizonSpec) -> Result<Graph> {
        let (n, edges, boundary) = match *self {
            Family::Path(l) => {
                if l < 2 {
                    return Err(Error::precondition("path needs at least 2 vertices"));
                }
                let edges = (0..l - 1).map(|i| (i, i + 1)).collect();
                (l, edges, vec![0, l - 1])
            }
            Family::Cycle(l) => {
                if l < 3 {
                    return Err(Error::precondition("cycle needs at least 3 vertices"));
                }
                let edges = (0..l).map(|i| (i, (i + 1) % l)).collect();
                (l, edges, vec![])
            }
            Family::Grid {
                width,
                height,
                torus,
            } => grid(width, height, torus)?,
            Family::Box3d {
                width,
                height,
                depth,
            } => box3d(width, height, depth)?,
            Family::Star(k) => {
                if k < 1 {
                    return Err(Error::precondition("star needs at least 1 leaf"));
                }
                let edges = (1..=k).map(|i| (0, i)).collect();
                (k + 1, edges, (1..=k).collect())
            }
        };
        let horizon = match horizon {
            HorizonSpec::Boundary => boundary,
            HorizonSpec::List(list) => list.clone(),
            HorizonSpec::None => vec![],
        };
        Graph::new(n, edges, horizon)
    }
}

type Built = (usize, Vec<(VertexId, VertexId)>, Vec<VertexId>);

fn grid(width: usize, height: usize, torus: bool) -> Result<Built> {
    if width == 0 || height == 0 || width * height < 2 {
        return Err(Error::precondition("grid needs at least 2 vertices"));
    }
    if torus && (width < 3 || height < 3) {
        return Err(Error::precondition("torus needs both sides at least 3"));
    }
    let id = |x: usize, y: usize| y * width + x;
    let mut edges = Vec::new();
    let mut boundary = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                edges.push((id(x, y), id(x + 1, y)));
            } else if torus {
                edges.push((id(x, y), id(0, y)));
            }
            if y + 1 < height {
                edges.push((id(x, y), id(x, y + 1)));
            } else if torus {
                edges.push((id(x, y), id(x, 0)));
            }
            if !torus && (x == 0 || y == 0 || x + 1 == width || y + 1 == height) {
                boundary.push(id(x, y));
            }
        }
    }
    Ok((width * height, edges, boundary))
}

fn box3d(width: usize, height: usize, depth: usize) -> Result<Built> {
    if width == 0 || height == 0 || depth == 0 || width * height * depth < 2 {
        return Err(Error::precondition("box needs at least 2 vertices"));
    }
    let id = |x: usize, y: usize, z: usize| (z * height + y) * width + x;
    let mut edges = Vec::new();
    let mut boundary = Vec::new();
    for z in 0..depth {
        for y in 0..height {
            for x in 0..width {
                if x + 1 < width {
                    edges.push((id(x, y, z), id(x + 1, y, z)));
                }
                if y + 1 < height {
                    edges.push((id(x, y, z), id(x, y + 1, z)));
                }
                if z + 1 < depth {
                    edges.push((id(x, y, z), id(x, y, z + 1)));
                }
                let on_face = x == 0
                    || y == 0
                    || z == 0
                    || x + 1 == width
                    || y + 1 == height
                    || z + 1 == depth;
                if on_face {
                    boundary.push(id(x, y, z));
                }
            }
        }
    }
    Ok((width * height * depth, edges, boundary))
}
