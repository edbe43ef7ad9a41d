//! Sub-determination: aggregating a MAG onto a proper subset of its aspects.

use super::{AspectSchema, CompanionTuple, CompositeVertex, DiGraph, Edge, GraphMode, MagError};

/// Which aspects survive a sub-determination (`true` = kept).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubDetMask {
    keep: Vec<bool>,
}

impl SubDetMask {
    pub fn new(keep: Vec<bool>) -> Self {
        Self { keep }
    }

    /// Mask over `order` aspects keeping exactly the listed positions.
    pub fn keeping(order: usize, kept: &[usize]) -> Self {
        let mut keep = vec![false; order];
        for &i in kept {
            if i < order {
                keep[i] = true;
            }
        }
        Self { keep }
    }

    /// Mask keeping the named aspects of `schema`.
    pub fn keeping_named(schema: &AspectSchema, names: &[&str]) -> Result<Self, MagError> {
        let mut keep = vec![false; schema.order()];
        for name in names {
            let i = schema
                .aspect_index(name)
                .ok_or_else(|| MagError::UnknownAspect((*name).to_string()))?;
            keep[i] = true;
        }
        Ok(Self { keep })
    }

    pub fn keep(&self) -> &[bool] {
        &self.keep
    }

    pub fn len(&self) -> usize {
        self.keep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keep.is_empty()
    }

    pub fn kept_count(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }

    pub fn kept_indices(&self) -> Vec<usize> {
        self.keep
            .iter()
            .enumerate()
            .filter_map(|(i, &k)| k.then_some(i))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.keep.iter().all(|&k| k)
    }

    /// At least one aspect kept and at least one dropped.
    pub fn is_proper(&self) -> bool {
        let kept = self.kept_count();
        kept > 0 && kept < self.keep.len()
    }

    /// The single-step mask equivalent to applying `self` and then `inner`,
    /// where `inner` ranges over the aspects kept by `self`.
    pub fn then(&self, inner: &SubDetMask) -> Result<SubDetMask, MagError> {
        if inner.len() != self.kept_count() {
            return Err(MagError::InvalidMask(format!(
                "inner mask has {} entries but {} aspects are kept",
                inner.len(),
                self.kept_count()
            )));
        }
        let mut it = inner.keep.iter();
        let keep = self
            .keep
            .iter()
            .map(|&k| k && *it.next().expect("length checked"))
            .collect();
        Ok(SubDetMask { keep })
    }
}

/// Every proper sub-determination mask over `p` aspects, `2^p - 2` in total,
/// in ascending bit order (aspect 0 is the low bit). Returns nothing for
/// `p < 2`.
pub fn enumerate_sub_determinations(p: usize) -> Vec<SubDetMask> {
    if p < 2 {
        return Vec::new();
    }
    assert!(p < 64, "cannot enumerate 2^{p} masks");
    let full = (1u64 << p) - 1;
    (1..full)
        .map(|bits| SubDetMask {
            keep: (0..p).map(|i| bits >> i & 1 == 1).collect(),
        })
        .collect()
}

/// What happens to edges whose projected endpoints coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfLoops {
    #[default]
    Drop,
    Keep,
}

/// A directed graph whose vertex labels are composite vertices encoded under
/// `schema`'s companion tuple.
///
/// This is the directed-graph half of a MAG's isomorphic pair, and also the
/// result type of sub-determination, so sub-determinations can be staged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspectGraph {
    schema: AspectSchema,
    graph: DiGraph,
    dropped_self_loops: usize,
}

impl AspectGraph {
    pub(crate) fn new(schema: AspectSchema, graph: DiGraph) -> Self {
        Self {
            schema,
            graph,
            dropped_self_loops: 0,
        }
    }

    pub fn schema(&self) -> &AspectSchema {
        &self.schema
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn into_graph(self) -> DiGraph {
        self.graph
    }

    pub fn companion_tuple(&self) -> CompanionTuple {
        self.schema.companion_tuple()
    }

    /// Source edges, counted with multiplicity, discarded as self-loops
    /// across all sub-determination stages that produced this graph.
    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    pub fn vertex(&self, v: usize) -> CompositeVertex {
        CompositeVertex::new(self.companion_tuple().decode_unchecked(self.graph.label(v)))
    }

    /// Element labels of vertex `v`, one per aspect.
    pub fn vertex_labels(&self, v: usize) -> Vec<&str> {
        let tuple = self.companion_tuple();
        let coords = tuple.decode_unchecked(self.graph.label(v));
        self.schema
            .aspects()
            .iter()
            .zip(coords)
            .map(|(a, c)| a.elements()[c as usize].as_str())
            .collect()
    }

    /// Projects every edge onto the kept aspects.
    ///
    /// The vertex set of the result is the projection of this graph's vertex
    /// set. In multidigraph mode each source edge survives as its own edge
    /// with multiplicity and tags intact; in digraph mode projected parallel
    /// edges collapse to a single untagged edge.
    pub fn sub_determine(
        &self,
        mask: &SubDetMask,
        mode: GraphMode,
        self_loops: SelfLoops,
    ) -> Result<AspectGraph, MagError> {
        let p = self.schema.order();
        if mask.len() != p {
            return Err(MagError::InvalidMask(format!(
                "mask has {} entries for {p} aspects",
                mask.len()
            )));
        }
        if mask.kept_count() == 0 {
            return Err(MagError::InvalidMask("no aspect kept".into()));
        }
        if mask.is_identity() {
            return Err(MagError::InvalidMask("identity mask drops no aspect".into()));
        }
        let kept = mask.kept_indices();
        let schema = AspectSchema::new(kept.iter().map(|&i| self.schema.aspect(i).clone()).collect())?;
        let source_tuple = self.companion_tuple();
        let target_tuple = schema.companion_tuple();

        let projected: Vec<u64> = self
            .graph
            .labels()
            .iter()
            .map(|&l| {
                let coords = source_tuple.decode_unchecked(l);
                let kept_coords: Vec<u32> = kept.iter().map(|&i| coords[i]).collect();
                target_tuple.encode_unchecked(&kept_coords)
            })
            .collect();
        let mut labels = projected.clone();
        labels.sort_unstable();
        labels.dedup();
        let vertex_of: Vec<usize> = projected
            .iter()
            .map(|l| labels.binary_search(l).expect("projected label present"))
            .collect();

        let mut dropped = 0;
        let mut edges = Vec::with_capacity(self.graph.edge_count());
        for e in self.graph.edges() {
            let source = vertex_of[e.source];
            let target = vertex_of[e.target];
            if source == target && self_loops == SelfLoops::Drop {
                dropped += e.multiplicity as usize;
                continue;
            }
            edges.push(Edge {
                source,
                target,
                multiplicity: e.multiplicity,
                tags: e.tags.clone(),
            });
        }
        let graph = DiGraph::from_parts(mode, labels, edges)?;
        Ok(AspectGraph {
            schema,
            graph,
            dropped_self_loops: self.dropped_self_loops + dropped,
        })
    }
}
