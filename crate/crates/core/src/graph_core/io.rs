use super::graph::Graph;
use crate::error::{Error, Result};

/// Parses the edge-list text format.
///
/// ```text
/// # comment
/// v 5
/// z 0 4
/// e 0 1
/// e 1 2
/// ```
///
/// `v` declares the vertex count and must precede `z` and `e` lines; `z`
/// lines may repeat. Edge ids follow the order of `e` lines.
pub fn load_graph(text: &str) -> Result<Graph> {
    let mut n_vertices: Option<usize> = None;
    let mut horizon = Vec::new();
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let tag = tokens.next().unwrap();
        let nums: Vec<usize> = tokens
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("expected a non-negative integer, found {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        match tag {
            "v" => {
                if n_vertices.is_some() {
                    return Err(parse_err("duplicate `v` line".into()));
                }
                if nums.len() != 1 {
                    return Err(parse_err("`v` takes exactly one count".into()));
                }
                n_vertices = Some(nums[0]);
            }
            "z" | "e" => {
                let n = n_vertices.ok_or_else(|| parse_err(format!("`{tag}` before `v`")))?;
                if let Some(&bad) = nums.iter().find(|&&x| x >= n) {
                    return Err(parse_err(format!("vertex {bad} out of range 0..{n}")));
                }
                if tag == "z" {
                    horizon.extend(nums);
                } else {
                    if nums.len() != 2 {
                        return Err(parse_err("`e` takes exactly two endpoints".into()));
                    }
                    edges.push((nums[0], nums[1]));
                }
            }
            other => return Err(parse_err(format!("unknown record type {other:?}"))),
        }
    }
    let n = n_vertices.ok_or(Error::Parse {
        line: 0,
        message: "missing `v` line".into(),
    })?;
    Graph::new(n, edges, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path_with_horizon() {
        let g = load_graph("v 5\nz 0 4\ne 0 1\ne 1 2\ne 2 3\ne 3 4\n").unwrap();
        assert_eq!(g.n_vertices(), 5);
        assert_eq!(g.n_edges(), 4);
        assert_eq!(g.horizon().to_vec(), vec![0, 4]);
        assert_eq!(g.edge(2), (2, 3));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = load_graph("# path\n\nv 2 # two\ne 0 1\n").unwrap();
        assert_eq!(g.n_edges(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match load_graph("v 3\ne 0 1\ne 1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            load_graph("v 8\ne 7 7\n"),
            Err(Error::SelfLoop { vertex: 7 })
        ));
        assert!(matches!(
            load_graph("v 4\ne 0 1\ne 2 3\n"),
            Err(Error::Disconnected { .. })
        ));
        assert!(matches!(
            load_graph("e 0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn round_trips_through_text() {
        let g = load_graph("v 4\nz 3\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n").unwrap();
        assert_eq!(load_graph(&g.to_edge_list()).unwrap(), g);
    }
}
