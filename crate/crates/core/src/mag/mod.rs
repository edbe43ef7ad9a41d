//! MultiAspect Graphs.
//!
//! A [`Mag`] has vertices that are tuples over independent aspects (for a
//! flight network: airport, airline layer, minute of week, period) and a
//! multiset of directed edges between them. Every MAG is isomorphic to a
//! directed graph together with its [`CompanionTuple`]: composite vertices
//! map to integers by mixed-radix encoding, see [`CompanionTuple::encode`].
//!
//! Only occupied composite vertices are materialized. The full product space
//! of a realistic schedule (110 airports x 14 layers x 10080 minutes x 2
//! periods) is far too sparse to allocate.

mod graph;
mod schema;
mod subdet;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use graph::{DiGraph, Edge, GraphMode, Tags};
pub use schema::{Aspect, AspectSchema, CompanionTuple, CompositeVertex};
pub use subdet::{enumerate_sub_determinations, AspectGraph, SelfLoops, SubDetMask};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MagError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("aspect `{0}` has no elements")]
    EmptyAspect(String),
    #[error("element `{element}` appears twice in aspect `{aspect}`")]
    DuplicateElement { aspect: String, element: String },
    #[error("unknown element `{element}` in aspect `{aspect}`")]
    UnknownElement { aspect: String, element: String },
    #[error("unknown aspect `{0}`")]
    UnknownAspect(String),
    #[error("expected {expected} coordinates, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("coordinate {coordinate} out of range for aspect {aspect} of size {size}")]
    CoordinateOutOfRange {
        aspect: usize,
        coordinate: u64,
        size: usize,
    },
    #[error("index {index} out of range for a composite space of size {space}")]
    IndexOutOfRange { index: u64, space: u64 },
    #[error("edge multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("invalid selector: {0}")]
    InvalidSelector(String),
    #[error("invalid sub-determination mask: {0}")]
    InvalidMask(String),
    #[error("graph error: {0}")]
    Graph(String),
}

/// A directed edge between composite vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MagEdge {
    pub from: CompositeVertex,
    pub to: CompositeVertex,
    pub multiplicity: u32,
    pub tags: Tags,
}

impl MagEdge {
    pub fn new(from: CompositeVertex, to: CompositeVertex) -> Self {
        Self {
            from,
            to,
            multiplicity: 1,
            tags: Tags::new(),
        }
    }

    pub fn with_tags(mut self, tags: Tags) -> Self {
        self.tags = tags;
        self
    }

    pub fn with_multiplicity(mut self, multiplicity: u32) -> Self {
        self.multiplicity = multiplicity;
        self
    }
}

/// Single-writer construction of a [`Mag`]. Call [`MagBuilder::freeze`] to
/// obtain the immutable graph.
#[derive(Debug, Clone)]
pub struct MagBuilder {
    schema: AspectSchema,
    edges: Vec<MagEdge>,
    vertices: BTreeSet<CompositeVertex>,
}

impl MagBuilder {
    pub fn new(schema: AspectSchema) -> Self {
        Self {
            schema,
            edges: Vec::new(),
            vertices: BTreeSet::new(),
        }
    }

    pub fn schema(&self) -> &AspectSchema {
        &self.schema
    }

    pub fn add_edge(&mut self, edge: MagEdge) -> Result<&mut Self, MagError> {
        self.schema.check_vertex(&edge.from)?;
        self.schema.check_vertex(&edge.to)?;
        if edge.multiplicity == 0 {
            return Err(MagError::ZeroMultiplicity);
        }
        self.edges.push(edge);
        Ok(self)
    }

    /// Adds an edge given one element label per aspect for each endpoint.
    pub fn add_labeled_edge(&mut self, from: &[&str], to: &[&str], tags: Tags) -> Result<&mut Self, MagError> {
        let from = self.schema.vertex(from)?;
        let to = self.schema.vertex(to)?;
        self.add_edge(MagEdge::new(from, to).with_tags(tags))
    }

    /// Registers a vertex that should appear in the directed-graph view even
    /// when no edge touches it.
    pub fn add_vertex(&mut self, v: CompositeVertex) -> Result<&mut Self, MagError> {
        self.schema.check_vertex(&v)?;
        self.vertices.insert(v);
        Ok(self)
    }

    pub fn freeze(mut self) -> Mag {
        self.edges.sort_unstable();
        Mag {
            schema: self.schema,
            edges: self.edges,
            vertices: self.vertices.into_iter().collect(),
        }
    }
}

/// A frozen MultiAspect Graph. Edges are stored in canonical order, so two
/// MAGs with the same schema and the same edge multiset compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mag {
    schema: AspectSchema,
    edges: Vec<MagEdge>,
    vertices: Vec<CompositeVertex>,
}

impl Mag {
    pub fn schema(&self) -> &AspectSchema {
        &self.schema
    }

    pub fn companion_tuple(&self) -> CompanionTuple {
        self.schema.companion_tuple()
    }

    pub fn edges(&self) -> &[MagEdge] {
        &self.edges
    }

    /// Explicitly registered vertices (possibly isolated).
    pub fn registered_vertices(&self) -> &[CompositeVertex] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The isomorphic directed graph: occupied composite vertices, labelled
    /// by their encoded index and numbered in ascending label order, with
    /// one edge per MAG edge.
    pub fn to_directed_graph(&self) -> (DiGraph, CompanionTuple) {
        let tuple = self.companion_tuple();
        let mut labels: Vec<u64> = self
            .edges
            .iter()
            .flat_map(|e| [&e.from, &e.to])
            .chain(&self.vertices)
            .map(|v| tuple.encode_unchecked(v.coords()))
            .collect();
        labels.sort_unstable();
        labels.dedup();
        let position = |l: u64| labels.binary_search(&l).expect("label registered above");
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                source: position(tuple.encode_unchecked(e.from.coords())),
                target: position(tuple.encode_unchecked(e.to.coords())),
                multiplicity: e.multiplicity,
                tags: e.tags.clone(),
            })
            .collect();
        let graph = DiGraph::from_parts(GraphMode::MultiDigraph, labels, edges)
            .expect("MAG edges are validated at construction");
        (graph, tuple)
    }

    /// The directed-graph view together with the schema, ready for
    /// sub-determination.
    pub fn aspect_graph(&self) -> AspectGraph {
        let (graph, _) = self.to_directed_graph();
        AspectGraph::new(self.schema.clone(), graph)
    }

    /// Aggregates the MAG onto the aspects kept by `mask`.
    pub fn sub_determine(
        &self,
        mask: &SubDetMask,
        mode: GraphMode,
        self_loops: SelfLoops,
    ) -> Result<AspectGraph, MagError> {
        self.aspect_graph().sub_determine(mask, mode, self_loops)
    }

    /// The sub-MAG induced by restricting each aspect to the selected
    /// elements. Only edges with both endpoints inside the selection
    /// survive; element order follows the original schema.
    pub fn sub_mag(&self, selector: &Selector) -> Result<Mag, MagError> {
        for name in selector.restrictions.keys() {
            if self.schema.aspect_index(name).is_none() {
                return Err(MagError::UnknownAspect(name.clone()));
            }
        }
        let mut aspects = Vec::with_capacity(self.schema.order());
        // remap[aspect][old position] = new position
        let mut remap: Vec<Vec<Option<u32>>> = Vec::with_capacity(self.schema.order());
        for aspect in self.schema.aspects() {
            let mut keep = vec![false; aspect.len()];
            match selector.restrictions.get(aspect.name()) {
                None => keep.iter_mut().for_each(|k| *k = true),
                Some(labels) => {
                    if labels.is_empty() {
                        return Err(MagError::InvalidSelector(format!(
                            "empty selection for aspect `{}`",
                            aspect.name()
                        )));
                    }
                    for l in labels {
                        let p = aspect.position(l).ok_or_else(|| MagError::UnknownElement {
                            aspect: aspect.name().to_string(),
                            element: l.clone(),
                        })?;
                        keep[p as usize] = true;
                    }
                }
            }
            let mut next = 0u32;
            let mut map = Vec::with_capacity(aspect.len());
            let mut elements = Vec::new();
            for (p, &k) in keep.iter().enumerate() {
                if k {
                    map.push(Some(next));
                    elements.push(aspect.elements()[p].clone());
                    next += 1;
                } else {
                    map.push(None);
                }
            }
            aspects.push(Aspect::new(aspect.name(), elements)?);
            remap.push(map);
        }
        let project = |v: &CompositeVertex| -> Option<CompositeVertex> {
            v.coords()
                .iter()
                .zip(&remap)
                .map(|(&c, map)| map[c as usize])
                .collect::<Option<Vec<u32>>>()
                .map(CompositeVertex::new)
        };
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                Some(MagEdge {
                    from: project(&e.from)?,
                    to: project(&e.to)?,
                    multiplicity: e.multiplicity,
                    tags: e.tags.clone(),
                })
            })
            .collect();
        let vertices = self.vertices.iter().filter_map(project).collect();
        Ok(MagBuilder {
            schema: AspectSchema::new(aspects)?,
            edges,
            vertices,
        }
        .freeze())
    }
}

/// Per-aspect element subsets for [`Mag::sub_mag`]. Aspects without a
/// restriction keep all their elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selector {
    restrictions: BTreeMap<String, Vec<String>>,
}

impl Selector {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn restrict<A, I, E>(mut self, aspect: A, elements: I) -> Self
    where
        A: Into<String>,
        I: IntoIterator<Item = E>,
        E: Into<String>,
    {
        self.restrictions
            .insert(aspect.into(), elements.into_iter().map(Into::into).collect());
        self
    }

    pub fn restrictions(&self) -> &BTreeMap<String, Vec<String>> {
        &self.restrictions
    }
}
