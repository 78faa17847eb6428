//! Plane forests of Motzkin paths with the trimming and lopping operators.
//!
//! Nodes are stored in depth-first preorder, so the subtree of node `v`
//! occupies the index range `v..v + subtree_size`. A forest is determined by
//! its preorder level sequence and every operator below rebuilds one.
//!
//! Height-0 flat steps separate trees, so a forest only sees a path up to how
//! its excursions are grouped under roots. Comparisons against paths go
//! through [`RootedForest::contour`], which forgets that grouping.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::paths::LatticePath;
use crate::young::{conjugate, YoungDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub parent: Option<usize>,
    pub first_child: Option<usize>,
    pub next_sibling: Option<usize>,
    /// Distance to the root; roots have level 0.
    pub level: usize,
    /// Number of nodes in the subtree, the node included.
    pub subtree_size: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RootedForest {
    nodes: Vec<Node>,
}

impl RootedForest {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds the forest with the given preorder levels.
    ///
    /// The first level must be 0 and each level may exceed the previous one by
    /// at most 1.
    pub fn from_levels(levels: &[usize]) -> Result<Self> {
        if let Some(&first) = levels.first() {
            if first != 0 {
                return Err(Error::Domain("the first node must be a root".into()));
            }
        }
        if let Some(i) = levels.windows(2).position(|w| w[1] > w[0] + 1) {
            return Err(Error::Domain(format!("node {} skips a level", i + 1)));
        }
        let n = levels.len();
        let mut nodes: Vec<Node> = levels
            .iter()
            .map(|&level| Node {
                parent: None,
                first_child: None,
                next_sibling: None,
                level,
                subtree_size: 1,
            })
            .collect();
        // spine[l] is the latest node at level l; last_child[v] the latest child.
        let mut spine: Vec<usize> = Vec::new();
        let mut last_child: Vec<Option<usize>> = vec![None; n];
        let mut last_root: Option<usize> = None;
        for v in 0..n {
            let l = levels[v];
            spine.truncate(l);
            if l == 0 {
                if let Some(r) = last_root {
                    nodes[r].next_sibling = Some(v);
                }
                last_root = Some(v);
            } else {
                let p = spine[l - 1];
                nodes[v].parent = Some(p);
                match last_child[p] {
                    Some(c) => nodes[c].next_sibling = Some(v),
                    None => nodes[p].first_child = Some(v),
                }
                last_child[p] = Some(v);
            }
            spine.push(v);
        }
        for v in (0..n).rev() {
            if let Some(p) = nodes[v].parent {
                nodes[p].subtree_size += nodes[v].subtree_size;
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn levels(&self) -> Vec<usize> {
        self.nodes.iter().map(|v| v.level).collect()
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].level == 0)
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(self.nodes[v].first_child, |&c| self.nodes[c].next_sibling)
    }

    pub fn tree_count(&self) -> usize {
        self.roots().count()
    }

    /// Childless non-root nodes.
    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|v| v.level > 0 && v.first_child.is_none())
            .count()
    }

    pub fn max_level(&self) -> usize {
        self.nodes.iter().map(|v| v.level).max().unwrap_or(0)
    }

    /// Preorder indices of the non-root nodes.
    pub fn non_roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].level > 0)
    }

    /// Concatenated tree contours with no flat steps between trees.
    pub fn contour(&self) -> LatticePath {
        let mut heights = vec![0i32];
        let mut h = 0i32;
        for v in &self.nodes {
            let target = v.level as i32 - 1;
            while h > target.max(0) {
                h -= 1;
                heights.push(h);
            }
            if v.level > 0 {
                h += 1;
                heights.push(h);
            }
        }
        while h > 0 {
            h -= 1;
            heights.push(h);
        }
        LatticePath::from_vec(heights)
    }

    /// Same contour, that is the same forest once trees sharing a root level
    /// are merged and isolated roots are ignored.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.contour() == other.contour()
    }

    fn shifted_levels(&self, range: std::ops::Range<usize>, by: usize) -> impl Iterator<Item = usize> + '_ {
        self.nodes[range].iter().map(move |v| v.level - by)
    }
}

/// Forest of a Motzkin path: one node per upstroke plus one root per tree.
///
/// Points at equal height are identified when the path stays at or above
/// that height between them. A flat step at height 0 ends the current tree.
pub fn forest_of_path(path: &LatticePath) -> Result<RootedForest> {
    path.require_motzkin("forest_of_path")?;
    let mut levels = Vec::with_capacity(path.upstroke_count() + 1);
    let mut root_open = false;
    for w in path.heights().windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > a {
            if a == 0 && !root_open {
                levels.push(0);
                root_open = true;
            }
            levels.push(b as usize);
        } else if a == 0 && b == 0 {
            root_open = false;
        }
    }
    RootedForest::from_levels(&levels)
}

/// Deletes every leaf, then drops trees left with only a root.
pub fn trim(forest: &RootedForest) -> RootedForest {
    let kept: Vec<usize> = forest
        .nodes()
        .iter()
        .filter(|v| v.level == 0 || v.first_child.is_some())
        .map(|v| v.level)
        .collect();
    let levels: Vec<usize> = kept
        .iter()
        .enumerate()
        .filter(|&(i, &l)| l > 0 || kept.get(i + 1).is_some_and(|&next| next > 0))
        .map(|(_, &l)| l)
        .collect();
    RootedForest::from_levels(&levels).expect("trimming keeps a valid level sequence")
}

/// Cuts the tree holding the rightmost deepest node along its trunk.
///
/// The trunk runs from the root down to the last node of maximal level. Each
/// trunk node is copied twice: once with the children left of the trunk and
/// once with the children right of it. Left copies come first, shallow to
/// deep, then right copies, deep to shallow. Trunk nodes without children
/// stay as isolated roots.
pub fn lop(forest: &RootedForest) -> RootedForest {
    let max = forest.max_level();
    if max == 0 {
        return forest.clone();
    }
    let nodes = forest.nodes();
    let deepest = nodes.iter().rposition(|v| v.level == max).unwrap();
    let mut trunk = vec![deepest];
    while let Some(p) = nodes[*trunk.last().unwrap()].parent {
        trunk.push(p);
    }
    trunk.reverse();
    let root = trunk[0];
    let end = root + nodes[root].subtree_size;

    let mut levels: Vec<usize> = forest.levels()[..root].to_vec();
    for (i, &t) in trunk.iter().enumerate() {
        levels.push(0);
        if let Some(&next) = trunk.get(i + 1) {
            levels.extend(forest.shifted_levels(t + 1..next, i));
        }
    }
    for (i, &t) in trunk.iter().enumerate().rev() {
        levels.push(0);
        if let Some(&next) = trunk.get(i + 1) {
            let after = next + nodes[next].subtree_size;
            levels.extend(forest.shifted_levels(after..t + nodes[t].subtree_size, i));
        }
    }
    levels.extend(forest.levels()[end..].iter().copied());
    RootedForest::from_levels(&levels).expect("lopping keeps a valid level sequence")
}

/// Rows from leaf counts of trimmed forests, columns from maximal levels of
/// lopped forests. The two must be conjugate.
pub fn young_from_forest(forest: &RootedForest) -> Result<YoungDiagram> {
    let mut rows = Vec::new();
    let mut f = forest.clone();
    loop {
        let leaves = f.leaf_count();
        if leaves == 0 {
            break;
        }
        rows.push(leaves);
        f = trim(&f);
    }
    let mut columns = Vec::new();
    let mut f = forest.clone();
    loop {
        let max = f.max_level();
        if max == 0 {
            break;
        }
        columns.push(max);
        f = lop(&f);
    }
    if conjugate(&columns) != rows {
        return Err(Error::Invariant(format!(
            "forest rows {rows:?} are not conjugate to columns {columns:?}"
        )));
    }
    YoungDiagram::from_columns(columns)
}

impl fmt::Display for RootedForest {
    /// One balanced-parentheses word per tree, separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut open = 0usize;
        for v in &self.nodes {
            while open > v.level {
                out.push(')');
                open -= 1;
            }
            if v.level == 0 && !out.is_empty() {
                out.push(' ');
            }
            out.push('(');
            open += 1;
        }
        while open > 0 {
            out.push(')');
            open -= 1;
        }
        f.write_str(&out)
    }
}

impl FromStr for RootedForest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut levels = Vec::new();
        let mut depth = 0usize;
        for (position, c) in s.chars().enumerate() {
            match c {
                '(' => {
                    levels.push(depth);
                    depth += 1;
                }
                ')' if depth > 0 => depth -= 1,
                ' ' if depth == 0 => {}
                found => return Err(Error::Parse { position, found }),
            }
        }
        if depth != 0 {
            return Err(Error::Domain("unbalanced parentheses".into()));
        }
        RootedForest::from_levels(&levels)
    }
}
