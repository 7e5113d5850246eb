//! Finite simple graphs, degree classes, the recursive regular decomposition
//! and brute-force automorphism enumeration.
//!
//! Vertices are 0-based everywhere in data.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count for which permutations are enumerated.
pub const MAX_BRUTE_FORCE: usize = 9;

/// Largest vertex count for which isomorphism classes are enumerated.
pub const MAX_ENUMERATION: usize = 6;

/// A finite simple undirected graph.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRecord", into = "GraphRecord")]
pub struct Graph {
    n: usize,
    /// Sorted, each pair stored as (min, max).
    edges: Vec<(usize, usize)>,
    adjacency: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct GraphRecord {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRecord> for Graph {
    type Error = Error;

    fn try_from(r: GraphRecord) -> Result<Self> {
        let edges: Vec<(usize, usize)> = r.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(r.n, &edges)
    }
}

impl From<Graph> for GraphRecord {
    fn from(g: Graph) -> Self {
        GraphRecord { n: g.n, edges: g.edges.iter().map(|&(u, v)| [u, v]).collect() }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Normalizes an edge list: duplicates are merged, loops rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut adjacency = vec![false; n * n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::LoopRejected(u));
            }
            adjacency[u * n + v] = true;
            adjacency[v * n + u] = true;
        }
        let mut normalized = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if adjacency[u * n + v] {
                    normalized.push((u, v));
                }
            }
        }
        Ok(Graph { n, edges: normalized, adjacency })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_edges(n, &edges).expect("valid complete graph")
    }

    pub fn empty(n: usize) -> Self {
        Graph::from_edges(n, &[]).expect("valid empty graph")
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    /// Path on three vertices with centre `0`; in 1-based labels, 2 - 1 - 3.
    pub fn path3() -> Self {
        Graph::from_edges(3, &[(0, 1), (0, 2)]).expect("valid path")
    }

    /// `K1 + K2`: vertex `0` isolated, edge `{1, 2}`.
    pub fn k1_k2() -> Self {
        Graph::from_edges(3, &[(1, 2)]).expect("valid graph")
    }

    /// Graph whose edges are the set bits of `mask` in lexicographic pair order
    /// `(0,1), (0,2), .., (1,2), ..`.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let edges: Vec<_> = pair_list(n)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        Graph::from_edges(n, &edges).expect("valid mask graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adjacency[x * self.n + y]
    }

    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.adjacent(x, y))
    }

    pub fn degree(&self, x: usize) -> usize {
        self.neighbors(x).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|x| self.degree(x)).collect()
    }

    pub fn is_regular(&self) -> bool {
        let degrees = self.degrees();
        degrees.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n - 1) / 2
    }

    /// Image of the graph under `perm`, which sends old vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &Permutation) -> Self {
        assert_eq!(perm.len(), self.n);
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm.apply(u), perm.apply(v))).collect();
        Graph::from_edges(self.n, &edges).expect("relabelling preserves simplicity")
    }

    /// Degree classes `V_k`, in increasing degree; vertices keep input order.
    pub fn degree_partition(&self) -> DegreePartition {
        let degrees = self.degrees();
        let mut distinct: Vec<usize> = degrees.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let classes = distinct
            .into_iter()
            .map(|k| DegreeClass {
                degree: k,
                vertices: (0..self.n).filter(|&v| degrees[v] == k).collect(),
            })
            .collect();
        DegreePartition { classes }
    }

    /// Subgraph induced by `subset`; vertex `subset[i]` becomes `i`.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<Graph> {
        let mut seen = HashSet::new();
        for &v in subset {
            if v >= self.n {
                return Err(Error::OutOfRange { vertex: v, n: self.n });
            }
            if !seen.insert(v) {
                return Err(Error::PreconditionFailed(format!("vertex {v} repeated in subset")));
            }
        }
        let mut edges = Vec::new();
        for (i, &u) in subset.iter().enumerate() {
            for (j, &v) in subset.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(subset.len(), &edges)
    }

    /// Repeatedly splits by degree inside the current induced subgraph until
    /// every piece is regular.
    pub fn regular_decomposition(&self) -> DecompositionTree {
        let all: Vec<usize> = (0..self.n).collect();
        DecompositionTree::build(self, all, None)
    }

    /// Brute-force automorphism group, in lexicographic order of the image arrays.
    pub fn automorphisms(&self) -> Result<Vec<Permutation>> {
        if self.n > MAX_BRUTE_FORCE {
            return Err(Error::TooLarge { n: self.n, max: MAX_BRUTE_FORCE });
        }
        let degrees = self.degrees();
        let mut images: Vec<usize> = (0..self.n).collect();
        let mut out = Vec::new();
        loop {
            let preserves_degree = (0..self.n).all(|v| degrees[images[v]] == degrees[v]);
            if preserves_degree && self.is_automorphism_images(&images) {
                out.push(Permutation { images: images.clone() });
            }
            if !next_permutation(&mut images) {
                break;
            }
        }
        Ok(out)
    }

    pub fn is_automorphism(&self, perm: &Permutation) -> bool {
        perm.len() == self.n && self.is_automorphism_images(&perm.images)
    }

    fn is_automorphism_images(&self, images: &[usize]) -> bool {
        (0..self.n).all(|x| {
            (x + 1..self.n).all(|y| self.adjacent(x, y) == self.adjacent(images[x], images[y]))
        })
    }
}

/// Necessary condition for a bi-unitary satisfying the orthogonality
/// relations: degree classes of equal size for every degree.
pub fn degree_compatibility(g1: &Graph, g2: &Graph) -> Result<bool> {
    if g1.n != g2.n {
        return Err(Error::SizeMismatch { left: g1.n, right: g2.n });
    }
    let sizes = |g: &Graph| -> Vec<(usize, usize)> {
        g.degree_partition().classes.iter().map(|c| (c.degree, c.vertices.len())).collect()
    };
    Ok(sizes(g1) == sizes(g2))
}

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("pivot exists");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeClass {
    pub degree: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePartition {
    pub classes: Vec<DegreeClass>,
}

impl DegreePartition {
    /// Vertices listed class by class.
    pub fn ordering(&self) -> Vec<usize> {
        self.classes.iter().flat_map(|c| c.vertices.iter().copied()).collect()
    }
}

/// One node of the regular decomposition. Vertex sets are in the labels of
/// the original graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTree {
    pub vertices: Vec<usize>,
    pub subgraph: Graph,
    pub regular: bool,
    /// Degree of these vertices inside the parent's induced subgraph; `None` at the root.
    pub class_degree: Option<usize>,
    /// Common degree inside `subgraph` when it is regular.
    pub regular_degree: Option<usize>,
    pub children: Vec<DecompositionTree>,
}

impl DecompositionTree {
    fn build(root: &Graph, vertices: Vec<usize>, class_degree: Option<usize>) -> Self {
        let subgraph = root.induced_subgraph(&vertices).expect("subset of the root graph");
        if subgraph.is_regular() {
            let regular_degree = Some(subgraph.degree(0));
            return DecompositionTree {
                vertices,
                subgraph,
                regular: true,
                class_degree,
                regular_degree,
                children: Vec::new(),
            };
        }
        let children = subgraph
            .degree_partition()
            .classes
            .into_iter()
            .map(|class| {
                let members = class.vertices.iter().map(|&i| vertices[i]).collect();
                DecompositionTree::build(root, members, Some(class.degree))
            })
            .collect();
        DecompositionTree {
            vertices,
            subgraph,
            regular: false,
            class_degree,
            regular_degree: None,
            children,
        }
    }

    pub fn leaves(&self) -> Vec<&DecompositionTree> {
        if self.children.is_empty() {
            return vec![self];
        }
        self.children.iter().flat_map(|c| c.leaves()).collect()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

/// A bijection of `0..n`; `images[v]` is the image of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n {
                return Err(Error::OutOfRange { vertex: v, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::PreconditionFailed(format!("{v} appears twice in permutation")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.images[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&v| self.images[v]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (v, &w) in self.images.iter().enumerate() {
            images[w] = v;
        }
        Permutation { images }
    }
}

/// Every labelled graph on `n` vertices, indexed by edge mask.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(move |mask| Graph::from_edge_mask(n, mask))
}

/// One representative per isomorphism class on `n` vertices: the graph whose
/// edge mask is smallest among its relabellings.
pub fn isomorphism_classes(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge { n, max: MAX_ENUMERATION });
    }
    if n == 0 {
        return Err(Error::NoVertices);
    }
    let pairs = pair_list(n);
    let mut index = vec![0usize; n * n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        index[u * n + v] = i;
        index[v * n + u] = i;
    }
    let mut perms = Vec::new();
    let mut images: Vec<usize> = (0..n).collect();
    loop {
        let edge_map: Vec<usize> =
            pairs.iter().map(|&(u, v)| index[images[u] * n + images[v]]).collect();
        perms.push(edge_map);
        if !next_permutation(&mut images) {
            break;
        }
    }
    let mut reps = Vec::new();
    for mask in 0..1u64 << pairs.len() {
        let minimal = perms.iter().all(|edge_map| {
            let mut image = 0u64;
            for (i, &j) in edge_map.iter().enumerate() {
                image |= (mask >> i & 1) << j;
            }
            image >= mask
        });
        if minimal {
            reps.push(Graph::from_edge_mask(n, mask));
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_examples() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3, Graph::complete(3));
        assert!(k3.is_complete());
        let e3 = Graph::from_edges(3, &[]).unwrap();
        assert!(e3.edges().is_empty());
        assert!(matches!(Graph::from_edges(3, &[(0, 0)]), Err(Error::LoopRejected(0))));
        assert!(matches!(Graph::from_edges(3, &[(0, 3)]), Err(Error::OutOfRange { vertex: 3, n: 3 })));
        assert!(matches!(Graph::from_edges(0, &[]), Err(Error::NoVertices)));
    }

    #[test]
    fn duplicate_edges_are_merged() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn degree_partition_examples() {
        let k3 = Graph::complete(3).degree_partition();
        assert_eq!(k3.classes, vec![DegreeClass { degree: 2, vertices: vec![0, 1, 2] }]);
        let path = Graph::path3().degree_partition();
        assert_eq!(
            path.classes,
            vec![
                DegreeClass { degree: 1, vertices: vec![1, 2] },
                DegreeClass { degree: 2, vertices: vec![0] }
            ]
        );
        let k1k2 = Graph::k1_k2().degree_partition();
        assert_eq!(
            k1k2.classes,
            vec![
                DegreeClass { degree: 0, vertices: vec![0] },
                DegreeClass { degree: 1, vertices: vec![1, 2] }
            ]
        );
    }

    #[test]
    fn induced_subgraph_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(k3.induced_subgraph(&[0, 1]).unwrap(), Graph::complete(2));
        assert_eq!(Graph::path3().induced_subgraph(&[1, 2]).unwrap(), Graph::empty(2));
        let c5 = Graph::cycle(5);
        assert_eq!(c5.induced_subgraph(&[0, 1, 2, 3, 4]).unwrap(), c5);
        assert!(matches!(k3.induced_subgraph(&[0, 5]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn regular_graph_decomposes_to_single_leaf() {
        let t = Graph::cycle(5).regular_decomposition();
        assert!(t.regular && t.children.is_empty());
        assert_eq!(t.regular_degree, Some(2));
    }

    #[test]
    fn path_decomposes_in_one_step() {
        let t = Graph::path3().regular_decomposition();
        assert!(!t.regular);
        assert_eq!(t.children.len(), 2);
        assert_eq!(t.children[0].vertices, vec![1, 2]);
        assert_eq!(t.children[0].subgraph, Graph::empty(2));
        assert_eq!(t.children[0].regular_degree, Some(0));
        assert_eq!(t.children[1].vertices, vec![0]);
        assert!(t.children.iter().all(|c| c.regular));
    }

    #[test]
    fn house_with_chord_decomposition() {
        // C5 plus chord (0,2): degrees 3,2,3,2,2.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let t = g.regular_decomposition();
        let mut leaves: Vec<Vec<usize>> = t.leaves().iter().map(|l| l.vertices.clone()).collect();
        leaves.sort();
        // Frozen from a hand refinement: {1,3,4} induces the single edge 3-4,
        // so it splits once more into {1} and {3,4}; {0,2} is an edge.
        assert_eq!(leaves, vec![vec![0, 2], vec![1], vec![3, 4]]);
        assert!(t.leaves().iter().all(|l| l.subgraph.is_regular()));
    }

    #[test]
    fn degree_compatibility_examples() {
        let k3 = Graph::complete(3);
        assert!(degree_compatibility(&k3, &k3).unwrap());
        assert!(!degree_compatibility(&k3, &Graph::path3()).unwrap());
        let k1_k3 = Graph::from_edges(4, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(!degree_compatibility(&Graph::cycle(4), &k1_k3).unwrap());
        assert!(matches!(
            degree_compatibility(&k3, &Graph::cycle(4)),
            Err(Error::SizeMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(Graph::complete(3).automorphisms().unwrap().len(), 6);
        let path = Graph::path3().automorphisms().unwrap();
        assert_eq!(path, vec![Permutation::identity(3), Permutation::new(vec![0, 2, 1]).unwrap()]);
        let k1k2 = Graph::k1_k2().automorphisms().unwrap();
        assert_eq!(k1k2, vec![Permutation::identity(3), Permutation::new(vec![0, 2, 1]).unwrap()]);
        assert!(matches!(Graph::empty(10).automorphisms(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn automorphisms_form_a_group() {
        for g in labeled_graphs(4) {
            let auts = g.automorphisms().unwrap();
            let set: HashSet<_> = auts.iter().cloned().collect();
            assert!(set.contains(&Permutation::identity(4)));
            for p in &auts {
                assert!(set.contains(&p.inverse()));
                for q in &auts {
                    assert!(set.contains(&p.compose(q)));
                }
            }
        }
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(3));
    }

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> =
            (1..=6).map(|n| isomorphism_classes(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn graph_json_shape() {
        let g = Graph::path3();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":3,"edges":[[0,1],[0,2]]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
    }
}
