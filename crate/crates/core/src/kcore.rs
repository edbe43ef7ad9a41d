//! K-core decomposition of digraphs and multi-digraphs.
//!
//! The k-core is the maximal subgraph in which every vertex has degree at
//! least `k`; the coreness of a vertex is the largest `k` whose core still
//! contains it. Coreness is computed by peeling in `O(V + E + max_degree)`
//! time with degree buckets. Parallel edges of a multi-digraph contribute
//! their full multiplicity to the degree unless the mode says otherwise.

use crate::mag::{DiGraph, GraphMode};

/// Which incident edges count toward a vertex's degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Direction {
    /// In-degree plus out-degree.
    #[default]
    Total,
    In,
    Out,
    /// Number of distinct neighbours, ignoring direction and multiplicity.
    Undirected,
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "total" => Ok(Direction::Total),
            "in" => Ok(Direction::In),
            "out" => Ok(Direction::Out),
            "undirected" => Ok(Direction::Undirected),
            other => Err(format!("unknown degree direction `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeMode {
    pub direction: Direction,
    /// Each parallel edge counts toward degree. When false, an ordered
    /// vertex pair contributes at most 1 no matter how many edges join it.
    pub count_multiplicity: bool,
}

impl DegreeMode {
    pub const TOTAL: DegreeMode = DegreeMode {
        direction: Direction::Total,
        count_multiplicity: true,
    };

    pub fn new(direction: Direction, count_multiplicity: bool) -> Self {
        Self {
            direction,
            count_multiplicity,
        }
    }
}

impl Default for DegreeMode {
    fn default() -> Self {
        Self::TOTAL
    }
}

/// Coreness of every vertex, indexed like the graph's vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorenessMap {
    coreness: Vec<usize>,
    max_k: usize,
}

impl CorenessMap {
    pub fn get(&self, vertex: usize) -> usize {
        self.coreness[vertex]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.coreness
    }

    /// Largest `k` with a nonempty k-core; 0 for the empty graph.
    pub fn max_k(&self) -> usize {
        self.max_k
    }

    pub fn len(&self) -> usize {
        self.coreness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coreness.is_empty()
    }

    /// Vertices whose coreness is at least `k`, ascending.
    pub fn core_vertices(&self, k: usize) -> Vec<usize> {
        (0..self.coreness.len()).filter(|&v| self.coreness[v] >= k).collect()
    }
}

/// Reverse incidence used while peeling: removing `v` lowers the degree of
/// each `(w, weight)` in `adjacent(v)`.
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<(u32, u64)>,
}

impl Adjacency {
    /// Initial weighted degrees and the matching adjacency.
    fn build(g: &DiGraph, mode: DegreeMode) -> (Vec<u64>, Self) {
        let n = g.vertex_count();
        let mut pairs: Vec<(usize, usize, u64)> = if mode.count_multiplicity || g.mode() == GraphMode::Digraph {
            g.edges()
                .iter()
                .map(|e| (e.source, e.target, e.multiplicity as u64))
                .collect()
        } else {
            // Edges are sorted by (source, target), so duplicates are adjacent.
            let mut p: Vec<(usize, usize, u64)> = g.edges().iter().map(|e| (e.source, e.target, 1)).collect();
            p.dedup_by_key(|&mut (s, t, _)| (s, t));
            p
        };
        if g.mode() == GraphMode::Digraph {
            for p in &mut pairs {
                p.2 = 1;
            }
        }
        if mode.direction == Direction::Undirected {
            for p in &mut pairs {
                *p = (p.0.min(p.1), p.0.max(p.1), 1);
            }
            pairs.retain(|&(s, t, _)| s != t);
            pairs.sort_unstable();
            pairs.dedup();
        }

        let mut degree = vec![0u64; n];
        let mut counts = vec![0usize; n + 1];
        for &(s, t, w) in &pairs {
            match mode.direction {
                Direction::Total | Direction::Undirected => {
                    degree[s] += w;
                    degree[t] += w;
                    if s != t {
                        counts[s] += 1;
                        counts[t] += 1;
                    }
                }
                Direction::In => {
                    degree[t] += w;
                    if s != t {
                        counts[s] += 1;
                    }
                }
                Direction::Out => {
                    degree[s] += w;
                    if s != t {
                        counts[t] += 1;
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for c in &counts[..n] {
            offsets.push(acc);
            acc += c;
        }
        offsets.push(acc);
        let mut fill = offsets.clone();
        let mut targets = vec![(0u32, 0u64); acc];
        let mut push = |from: usize, to: usize, w: u64| {
            targets[fill[from]] = (to as u32, w);
            fill[from] += 1;
        };
        for &(s, t, w) in &pairs {
            if s == t {
                continue;
            }
            match mode.direction {
                Direction::Total | Direction::Undirected => {
                    push(s, t, w);
                    push(t, s, w);
                }
                Direction::In => push(s, t, w),
                Direction::Out => push(t, s, w),
            }
        }
        (degree, Self { offsets, targets })
    }

    fn adjacent(&self, v: usize) -> &[(u32, u64)] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Computes the coreness of every vertex by minimum-degree peeling.
pub fn coreness(g: &DiGraph, mode: DegreeMode) -> CorenessMap {
    let n = g.vertex_count();
    if n == 0 {
        return CorenessMap {
            coreness: Vec::new(),
            max_k: 0,
        };
    }
    assert!(n <= u32::MAX as usize, "graph too large for peeling");
    let (mut degree, adjacency) = Adjacency::build(g, mode);

    let max_degree = degree.iter().copied().max().unwrap_or(0) as usize;
    // Bucket queues as intrusive singly linked lists over an entry arena.
    // Stale entries (vertex removed or degree changed) are skipped on pop.
    const NIL: u32 = u32::MAX;
    let mut head = vec![NIL; max_degree + 1];
    let mut entries: Vec<(u32, u32)> = Vec::with_capacity(n + adjacency.targets.len());
    let push = |head: &mut Vec<u32>, entries: &mut Vec<(u32, u32)>, bucket: usize, v: usize| {
        let id = entries.len() as u32;
        entries.push((v as u32, head[bucket]));
        head[bucket] = id;
    };
    // Reverse insertion so the initial pops come out in ascending index order.
    for v in (0..n).rev() {
        push(&mut head, &mut entries, degree[v] as usize, v);
    }

    let mut removed = vec![false; n];
    let mut core = vec![0usize; n];
    let mut remaining = n;
    let mut k = 0usize;
    while remaining > 0 && k <= max_degree {
        let id = head[k];
        if id == NIL {
            k += 1;
            continue;
        }
        let (v, next) = entries[id as usize];
        head[k] = next;
        let v = v as usize;
        if removed[v] || degree[v] as usize != k {
            continue;
        }
        removed[v] = true;
        remaining -= 1;
        core[v] = k;
        for &(w, weight) in adjacency.adjacent(v) {
            let w = w as usize;
            if removed[w] {
                continue;
            }
            let lowered = degree[w].saturating_sub(weight).max(k as u64);
            if lowered != degree[w] {
                degree[w] = lowered;
                push(&mut head, &mut entries, lowered as usize, w);
            }
        }
    }
    let max_k = core.iter().copied().max().unwrap_or(0);
    CorenessMap { coreness: core, max_k }
}

/// An induced subgraph at one core level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreSubgraph {
    pub k: usize,
    /// Member vertices, ascending.
    pub vertices: Vec<usize>,
    /// Induced edges as `(source, target, multiplicity)`, in the graph's
    /// canonical edge order.
    pub edges: Vec<(usize, usize, u32)>,
}

impl CoreSubgraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edge count with multiplicities expanded.
    pub fn edge_count(&self) -> u64 {
        self.edges.iter().map(|e| e.2 as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Induced subgraph of `g` on `vertices` (which must be ascending).
    pub fn induced(g: &DiGraph, k: usize, vertices: Vec<usize>) -> Self {
        let mut member = vec![false; g.vertex_count()];
        for &v in &vertices {
            member[v] = true;
        }
        let edges = g
            .edges()
            .iter()
            .filter(|e| member[e.source] && member[e.target])
            .map(|e| (e.source, e.target, e.multiplicity))
            .collect();
        Self { k, vertices, edges }
    }
}

/// The k-core: induced subgraph on vertices with coreness at least `k`.
/// Empty when `k` exceeds the maximum core number.
pub fn k_core(g: &DiGraph, mode: DegreeMode, k: usize) -> CoreSubgraph {
    k_core_from(g, &coreness(g, mode), k)
}

/// Like [`k_core`] but reuses an already computed coreness map.
pub fn k_core_from(g: &DiGraph, map: &CorenessMap, k: usize) -> CoreSubgraph {
    CoreSubgraph::induced(g, k, map.core_vertices(k))
}

/// The maximum k-core. The empty graph yields an empty core with `k = 0`.
pub fn max_core(g: &DiGraph, mode: DegreeMode) -> CoreSubgraph {
    let map = coreness(g, mode);
    k_core_from(g, &map, map.max_k())
}

#[cfg(test)]
mod tests {
    use super::*;
    use airmag_testkit::oracle::{naive_coreness, OracleDirection};
    use proptest::prelude::*;

    fn multi(n: usize, pairs: &[(usize, usize, u32)]) -> DiGraph {
        DiGraph::from_pairs(GraphMode::MultiDigraph, n, pairs).unwrap()
    }

    fn di(n: usize, pairs: &[(usize, usize, u32)]) -> DiGraph {
        DiGraph::from_pairs(GraphMode::Digraph, n, pairs).unwrap()
    }

    fn bidirectional(vertices: &[usize]) -> Vec<(usize, usize, u32)> {
        let mut pairs = Vec::new();
        for &a in vertices {
            for &b in vertices {
                if a != b {
                    pairs.push((a, b, 1));
                }
            }
        }
        pairs
    }

    #[test]
    fn empty_graph() {
        let m = coreness(&DiGraph::empty(GraphMode::Digraph), DegreeMode::TOTAL);
        assert!(m.is_empty());
        assert_eq!(m.max_k(), 0);
        let core = max_core(&DiGraph::empty(GraphMode::Digraph), DegreeMode::TOTAL);
        assert_eq!((core.k, core.vertex_count(), core.edge_count()), (0, 0, 0));
    }

    #[test]
    fn bidirectional_triangle_total_degree() {
        let g = di(3, &bidirectional(&[0, 1, 2]));
        let m = coreness(&g, DegreeMode::TOTAL);
        assert_eq!(m.as_slice(), &[4, 4, 4]);
        assert_eq!(
            naive_coreness(
                3,
                &[(0, 1, 1), (1, 0, 1), (0, 2, 1), (2, 0, 1), (1, 2, 1), (2, 1, 1)],
                OracleDirection::Total,
                true
            ),
            vec![4, 4, 4]
        );
    }

    #[test]
    fn undirected_view_counts_neighbours() {
        let mut pairs = bidirectional(&[0, 1, 2]);
        pairs.push((0, 1, 5));
        let g = multi(3, &pairs);
        let mode = DegreeMode::new(Direction::Undirected, true);
        assert_eq!(coreness(&g, mode).as_slice(), &[2, 2, 2]);
        let star = multi(4, &[(0, 1, 3), (2, 0, 1), (0, 3, 2), (3, 0, 2)]);
        assert_eq!(coreness(&star, mode).as_slice(), &[1, 1, 1, 1]);
    }

    #[test]
    fn parallel_pair_coreness_is_multiplicity() {
        for m in [1u32, 2, 7, 395] {
            // Mixed orientation: half one way, half the other.
            let fwd = m / 2;
            let mut pairs = vec![(0, 1, m - fwd)];
            if fwd > 0 {
                pairs.push((1, 0, fwd));
            }
            let g = multi(2, &pairs);
            let map = coreness(&g, DegreeMode::TOTAL);
            assert_eq!(map.as_slice(), &[m as usize, m as usize]);
            let core = max_core(&g, DegreeMode::TOTAL);
            assert_eq!(
                (core.k, core.vertex_count(), core.edge_count()),
                (m as usize, 2, m as u64)
            );
        }
    }

    #[test]
    fn star_has_max_core_one() {
        let pairs: Vec<_> = (1..=5).map(|leaf| (0, leaf, 1)).collect();
        let g = di(6, &pairs);
        let core = max_core(&g, DegreeMode::TOTAL);
        assert_eq!(core.k, 1);
        assert_eq!(core.vertices, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(naive_coreness(6, &pairs, OracleDirection::Total, true), vec![1; 6]);
    }

    #[test]
    fn clique_beats_path() {
        let mut pairs = bidirectional(&[0, 1, 2, 3]);
        pairs.extend([(4, 5, 1), (5, 6, 1), (6, 7, 1)]);
        let g = di(8, &pairs);
        let core = max_core(&g, DegreeMode::TOTAL);
        assert_eq!(core.k, 6);
        assert_eq!(core.vertices, vec![0, 1, 2, 3]);
        assert_eq!(core.edge_count(), 12);
        let expected = naive_coreness(8, &pairs, OracleDirection::Total, true);
        assert_eq!(coreness(&g, DegreeMode::TOTAL).as_slice(), expected.as_slice());
    }

    #[test]
    fn pruning_leaves_gives_two_core() {
        // A 4-cycle with two pendant vertices hanging off it.
        let pairs = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (0, 4, 1), (5, 2, 1)];
        let g = di(6, &pairs);
        let map = coreness(&g, DegreeMode::TOTAL);
        assert_eq!(map.max_k(), 2);
        assert_eq!(k_core(&g, DegreeMode::TOTAL, 2).vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn k_core_levels() {
        let g = di(5, &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1)]);
        let map = coreness(&g, DegreeMode::TOTAL);
        let zero = k_core(&g, DegreeMode::TOTAL, 0);
        assert_eq!(zero.vertex_count(), 5);
        assert_eq!(zero.edges.len(), 4);
        assert_eq!(
            k_core(&g, DegreeMode::TOTAL, map.max_k()),
            max_core(&g, DegreeMode::TOTAL)
        );
        assert!(k_core(&g, DegreeMode::TOTAL, map.max_k() + 1).is_empty());
    }

    #[test]
    fn isolated_vertices_only_in_zero_core() {
        let g = di(3, &[(0, 1, 1)]);
        let map = coreness(&g, DegreeMode::TOTAL);
        assert_eq!(map.as_slice(), &[1, 1, 0]);
        assert_eq!(k_core(&g, DegreeMode::TOTAL, 1).vertices, vec![0, 1]);
    }

    #[test]
    fn in_and_out_modes() {
        // 0 -> 1, 0 -> 2, 1 -> 2, 2 -> 0
        let pairs = [(0, 1, 1), (0, 2, 1), (1, 2, 1), (2, 0, 1)];
        let g = di(3, &pairs);
        for (dir, odir) in [
            (Direction::In, OracleDirection::In),
            (Direction::Out, OracleDirection::Out),
            (Direction::Total, OracleDirection::Total),
        ] {
            let got = coreness(&g, DegreeMode::new(dir, true));
            assert_eq!(
                got.as_slice(),
                naive_coreness(3, &pairs, odir, true).as_slice(),
                "{dir:?}"
            );
        }
    }

    #[test]
    fn multiplicity_counting_switch() {
        let g = multi(2, &[(0, 1, 5), (0, 1, 2), (1, 0, 1)]);
        assert_eq!(coreness(&g, DegreeMode::new(Direction::Total, true)).max_k(), 8);
        assert_eq!(coreness(&g, DegreeMode::new(Direction::Total, false)).max_k(), 2);
    }

    #[test]
    fn self_loops_count_twice_in_total_degree() {
        let g = multi(2, &[(0, 0, 1), (0, 1, 1)]);
        let pairs = [(0, 0, 1), (0, 1, 1)];
        let got = coreness(&g, DegreeMode::TOTAL);
        assert_eq!(
            got.as_slice(),
            naive_coreness(2, &pairs, OracleDirection::Total, true).as_slice()
        );
    }

    fn arb_multigraph() -> impl Strategy<Value = (usize, Vec<(usize, usize, u32)>)> {
        (1usize..16).prop_flat_map(|n| {
            let edge = (0..n, 0..n, 1u32..4);
            (Just(n), prop::collection::vec(edge, 0..40))
        })
    }

    proptest! {
        #[test]
        fn peeling_matches_naive_oracle((n, pairs) in arb_multigraph(), dir in 0u8..3, count in any::<bool>()) {
            let (direction, odir) = match dir {
                0 => (Direction::Total, OracleDirection::Total),
                1 => (Direction::In, OracleDirection::In),
                _ => (Direction::Out, OracleDirection::Out),
            };
            let g = multi(n, &pairs);
            let got = coreness(&g, DegreeMode::new(direction, count));
            let expected = naive_coreness(n, &pairs, odir, count);
            prop_assert_eq!(got.as_slice(), expected.as_slice());
        }

        #[test]
        fn undirected_matches_oracle_on_simple_pairs((n, pairs) in arb_multigraph()) {
            let mut simple: Vec<(usize, usize, u32)> = pairs
                .iter()
                .filter(|&&(s, t, _)| s != t)
                .map(|&(s, t, _)| (s.min(t), s.max(t), 1))
                .collect();
            simple.sort_unstable();
            simple.dedup();
            let got = coreness(&multi(n, &pairs), DegreeMode::new(Direction::Undirected, true));
            let expected = naive_coreness(n, &simple, OracleDirection::Total, true);
            prop_assert_eq!(got.as_slice(), expected.as_slice());
        }

        #[test]
        fn cores_are_nested((n, pairs) in arb_multigraph()) {
            let g = multi(n, &pairs);
            let map = coreness(&g, DegreeMode::TOTAL);
            for k in 0..=map.max_k() {
                let outer = map.core_vertices(k);
                let inner = map.core_vertices(k + 1);
                prop_assert!(inner.iter().all(|v| outer.binary_search(v).is_ok()));
            }
        }

        #[test]
        fn digraph_view_never_exceeds_multigraph((n, pairs) in arb_multigraph()) {
            let m = coreness(&multi(n, &pairs), DegreeMode::TOTAL).max_k();
            let d = coreness(&di(n, &pairs), DegreeMode::TOTAL).max_k();
            prop_assert!(d <= m);
        }
    }
}
