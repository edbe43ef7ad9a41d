use std::collections::HashMap;

use super::MagError;

/// One independent dimension of a modeled system, such as localities, layers
/// or time instants. Element order is fixed at construction.
#[derive(Debug, Clone)]
pub struct Aspect {
    name: String,
    elements: Vec<String>,
    index: HashMap<String, u32>,
}

impl Aspect {
    pub fn new<S, I, E>(name: S, elements: I) -> Result<Self, MagError>
    where
        S: Into<String>,
        I: IntoIterator<Item = E>,
        E: Into<String>,
    {
        let name = name.into();
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(MagError::EmptyAspect(name));
        }
        if elements.len() > u32::MAX as usize {
            return Err(MagError::Schema(format!("aspect `{name}` has too many elements")));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, label) in elements.iter().enumerate() {
            if index.insert(label.clone(), i as u32).is_some() {
                return Err(MagError::DuplicateElement {
                    aspect: name,
                    element: label.clone(),
                });
            }
        }
        Ok(Self { name, elements, index })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<u32> {
        self.index.get(label).copied()
    }

    pub fn label(&self, position: u32) -> Option<&str> {
        self.elements.get(position as usize).map(String::as_str)
    }
}

impl PartialEq for Aspect {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.elements == other.elements
    }
}

impl Eq for Aspect {}

/// The ordered aspect list of a MAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspectSchema {
    aspects: Vec<Aspect>,
}

impl AspectSchema {
    pub fn new(aspects: Vec<Aspect>) -> Result<Self, MagError> {
        if aspects.is_empty() {
            return Err(MagError::Schema("a schema needs at least one aspect".into()));
        }
        for (i, a) in aspects.iter().enumerate() {
            if aspects[..i].iter().any(|b| b.name == a.name) {
                return Err(MagError::Schema(format!("duplicate aspect name `{}`", a.name)));
            }
        }
        let schema = Self { aspects };
        // Rejects schemas whose composite space does not fit an index.
        schema.companion_tuple().checked_space_size()?;
        Ok(schema)
    }

    /// Number of aspects, `p`.
    pub fn order(&self) -> usize {
        self.aspects.len()
    }

    pub fn aspects(&self) -> &[Aspect] {
        &self.aspects
    }

    pub fn aspect(&self, i: usize) -> &Aspect {
        &self.aspects[i]
    }

    pub fn aspect_index(&self, name: &str) -> Option<usize> {
        self.aspects.iter().position(|a| a.name == name)
    }

    pub fn companion_tuple(&self) -> CompanionTuple {
        CompanionTuple {
            sizes: self.aspects.iter().map(Aspect::len).collect(),
        }
    }

    /// Resolves one label per aspect into a composite vertex.
    pub fn vertex(&self, labels: &[&str]) -> Result<CompositeVertex, MagError> {
        if labels.len() != self.order() {
            return Err(MagError::Arity {
                expected: self.order(),
                found: labels.len(),
            });
        }
        let coords = self
            .aspects
            .iter()
            .zip(labels)
            .map(|(a, l)| {
                a.position(l).ok_or_else(|| MagError::UnknownElement {
                    aspect: a.name.clone(),
                    element: (*l).to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CompositeVertex(coords))
    }

    pub fn labels<'a>(&'a self, v: &CompositeVertex) -> Vec<&'a str> {
        self.aspects
            .iter()
            .zip(v.coords())
            .map(|(a, &c)| a.elements[c as usize].as_str())
            .collect()
    }

    pub(crate) fn check_vertex(&self, v: &CompositeVertex) -> Result<(), MagError> {
        self.companion_tuple().check(v.coords())
    }
}

/// Per-aspect cardinalities `(n1, ..., np)`. Together with the encoded
/// directed graph it determines the MAG up to labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompanionTuple {
    sizes: Vec<usize>,
}

impl CompanionTuple {
    pub fn new(sizes: Vec<usize>) -> Result<Self, MagError> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(MagError::Schema(format!(
                "companion tuple sizes must be positive, got {sizes:?}"
            )));
        }
        let t = Self { sizes };
        t.checked_space_size()?;
        Ok(t)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn order(&self) -> usize {
        self.sizes.len()
    }

    /// Size of the composite vertex space, the product of all sizes.
    pub fn space_size(&self) -> u64 {
        self.sizes.iter().map(|&n| n as u64).product()
    }

    fn checked_space_size(&self) -> Result<u64, MagError> {
        self.sizes
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n as u64))
            .ok_or_else(|| MagError::Schema("composite vertex space exceeds u64".into()))
    }

    fn check(&self, coords: &[u32]) -> Result<(), MagError> {
        if coords.len() != self.sizes.len() {
            return Err(MagError::Arity {
                expected: self.sizes.len(),
                found: coords.len(),
            });
        }
        for (aspect, (&c, &n)) in coords.iter().zip(&self.sizes).enumerate() {
            if c as usize >= n {
                return Err(MagError::CoordinateOutOfRange {
                    aspect,
                    coordinate: c as u64,
                    size: n,
                });
            }
        }
        Ok(())
    }

    /// Mixed-radix encoding with aspect 0 least significant:
    /// `c0 + n1*(c1 + n2*(c2 + ...))`.
    pub fn encode(&self, v: &CompositeVertex) -> Result<u64, MagError> {
        self.check(v.coords())?;
        Ok(self.encode_unchecked(v.coords()))
    }

    pub(crate) fn encode_unchecked(&self, coords: &[u32]) -> u64 {
        coords
            .iter()
            .zip(&self.sizes)
            .rev()
            .fold(0u64, |acc, (&c, &n)| acc * n as u64 + c as u64)
    }

    pub fn decode(&self, index: u64) -> Result<CompositeVertex, MagError> {
        let space = self.space_size();
        if index >= space {
            return Err(MagError::IndexOutOfRange { index, space });
        }
        Ok(CompositeVertex(self.decode_unchecked(index)))
    }

    pub(crate) fn decode_unchecked(&self, mut index: u64) -> Vec<u32> {
        self.sizes
            .iter()
            .map(|&n| {
                let c = index % n as u64;
                index /= n as u64;
                c as u32
            })
            .collect()
    }
}

/// An element of the Cartesian product of all aspects, stored as one element
/// position per aspect.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositeVertex(Vec<u32>);

impl CompositeVertex {
    pub fn new(coords: Vec<u32>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }
}

impl From<Vec<u32>> for CompositeVertex {
    fn from(coords: Vec<u32>) -> Self {
        Self(coords)
    }
}
