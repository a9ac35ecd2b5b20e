use super::graph::{Graph, VertexId};
use super::sets::VertexSet;
use crate::error::{Error, Result};

/// Visits every connected vertex set that contains `root` and lies inside
/// `allowed`, exactly once each.
///
/// Include/exclude branching on the frontier: each frontier vertex is either
/// excluded for the rest of the branch or added, which makes every set the
/// leaf of exactly one branch. Stops with `CapExceeded` once more than `cap`
/// sets have been produced.
pub fn for_each_connected_set(
    graph: &Graph,
    root: VertexId,
    allowed: &VertexSet,
    cap: usize,
    mut visit: impl FnMut(&VertexSet),
) -> Result<usize> {
    if !allowed.contains(root) {
        return Ok(0);
    }
    let n = graph.n_vertices();
    let mut current = VertexSet::empty(n);
    current.insert(root);
    let mut blocked = VertexSet::empty(n);
    blocked.insert(root);
    let frontier: Vec<VertexId> = graph
        .neighbours(root)
        .filter(|&w| allowed.contains(w))
        .collect();
    for &w in &frontier {
        blocked.insert(w);
    }
    let mut count = 0usize;
    let mut walker = Walker {
        graph,
        allowed,
        cap,
        count: &mut count,
        visit: &mut visit,
    };
    walker.recurse(&mut current, frontier, &mut blocked)?;
    Ok(count)
}

struct Walker<'a, F: FnMut(&VertexSet)> {
    graph: &'a Graph,
    allowed: &'a VertexSet,
    cap: usize,
    count: &'a mut usize,
    visit: &'a mut F,
}

impl<F: FnMut(&VertexSet)> Walker<'_, F> {
    // `blocked` holds the current set, everything currently on the frontier
    // and everything excluded on this branch.
    fn recurse(
        &mut self,
        current: &mut VertexSet,
        mut frontier: Vec<VertexId>,
        blocked: &mut VertexSet,
    ) -> Result<()> {
        let Some(w) = frontier.pop() else {
            *self.count += 1;
            if *self.count > self.cap {
                return Err(Error::CapExceeded {
                    what: "connected vertex sets",
                    cap: self.cap,
                    actual: *self.count,
                });
            }
            (self.visit)(current);
            return Ok(());
        };
        // exclude w: it stays blocked
        self.recurse(current, frontier.clone(), blocked)?;
        // include w
        current.insert(w);
        let fresh: Vec<VertexId> = self
            .graph
            .neighbours(w)
            .filter(|&x| self.allowed.contains(x) && !blocked.contains(x))
            .collect();
        for &x in &fresh {
            blocked.insert(x);
            frontier.push(x);
        }
        self.recurse(current, frontier, blocked)?;
        for &x in &fresh {
            blocked.remove(x);
        }
        current.remove(w);
        Ok(())
    }
}

/// Collects every connected subset of `allowed` (each exactly once), by
/// rooting each set at its smallest vertex.
pub fn all_connected_sets(
    graph: &Graph,
    allowed: &VertexSet,
    cap: usize,
) -> Result<Vec<VertexSet>> {
    let mut out = Vec::new();
    for root in allowed.iter() {
        let mut restricted = allowed.clone();
        for v in 0..root {
            restricted.remove(v);
        }
        let remaining = cap.saturating_sub(out.len());
        for_each_connected_set(graph, root, &restricted, remaining, |s| out.push(s.clone()))?;
    }
    Ok(out)
}
