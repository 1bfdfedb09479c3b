use super::RootedHypertree;
use crate::error::{Error, Result};

/// Isomorphism-invariant code of a rooted hypertree.
///
/// A vertex is encoded as `v` followed by the sorted codes of its child
/// edges, an edge as `e` followed by the sorted codes of its non-parent
/// vertices. Every child code is written as `<len>:<code>`, so the encoding
/// is prefix-free without escaping. Two rooted hypertrees get the same code
/// exactly when they are isomorphic as rooted hypertrees.
pub fn canonical_code(tree: &RootedHypertree) -> Result<String> {
    let g = tree.graph();
    if !g.is_hypertree() {
        return Err(Error::NotHypertree);
    }
    Ok(vertex_code(tree, tree.root(), usize::MAX))
}

fn vertex_code(tree: &RootedHypertree, v: usize, parent_edge: usize) -> String {
    let g = tree.graph();
    let mut children: Vec<String> = g
        .incident(v)
        .iter()
        .filter(|&&e| e != parent_edge)
        .map(|&e| {
            let mut members: Vec<String> =
                g.edge(e).iter().filter(|&&w| w != v).map(|&w| vertex_code(tree, w, e)).collect();
            members.sort_unstable();
            join('e', &members)
        })
        .collect();
    children.sort_unstable();
    join('v', &children)
}

fn join(tag: char, parts: &[String]) -> String {
    let mut s = String::with_capacity(1 + parts.iter().map(|p| p.len() + 4).sum::<usize>());
    s.push(tag);
    for p in parts {
        s.push_str(&p.len().to_string());
        s.push(':');
        s.push_str(p);
    }
    s
}
