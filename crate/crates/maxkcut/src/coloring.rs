//! Equivalence relations over the `2^{n_k}` binary color labels of a vertex
//! register: closure from generating pairs, the merged-tail and balanced
//! relations, and decoding of basis bitstrings into color assignments.
//!
//! Bit order inside a vertex block is MSB first: the block's first (lowest
//! indexed) qubit is the most significant bit of the label.

use serde::{Deserialize, Serialize};

use crate::graph::Assignment;

#[derive(Debug, thiserror::Error)]
pub enum ColoringError {
    #[error("pair ({0}, {1}) is outside the domain 0..{2}")]
    PairOutOfDomain(u32, u32, u32),
    #[error("invalid relation: {0}")]
    Invalid(String),
    #[error("bitstring has {got} bits but {want} were expected")]
    LengthMismatch { got: usize, want: usize },
}

/// Number of qubits needed per vertex: `ceil(log2(k))`.
pub fn qubits_per_vertex(k: u32) -> u32 {
    assert!(k >= 2, "k must be at least 2");
    32 - (k - 1).leading_zeros()
}

/// Which of the two concrete relation families a separator realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationVariant {
    /// Labels `k-1 ..= 2^{n_k}-1` merged into one color.
    LessThan,
    /// Every color class has at most two labels.
    Balanced,
}

impl std::fmt::Display for RelationVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RelationVariant::LessThan => write!(f, "<k"),
            RelationVariant::Balanced => write!(f, "bal"),
        }
    }
}

/// A partition of the labels `{0, .., 2^{n_k}-1}` into exactly `k` color
/// classes. Classes are sorted by smallest member; a label's color index is
/// the rank of its class in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorRelation {
    k: u32,
    n_k: u32,
    classes: Vec<Vec<u32>>,
    /// label -> smallest member of its class
    representative: Vec<u32>,
    /// label -> class index in `classes`
    class_index: Vec<u32>,
}

impl ColorRelation {
    fn from_classes(k: u32, mut classes: Vec<Vec<u32>>) -> Result<Self, ColoringError> {
        let n_k = qubits_per_vertex(k);
        let domain = 1u32 << n_k;
        if classes.len() != k as usize {
            return Err(ColoringError::Invalid(format!(
                "{} classes but k = {k}",
                classes.len()
            )));
        }
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        let mut representative = vec![u32::MAX; domain as usize];
        let mut class_index = vec![u32::MAX; domain as usize];
        for (i, class) in classes.iter().enumerate() {
            for &label in class {
                if label >= domain {
                    return Err(ColoringError::Invalid(format!(
                        "label {label} outside domain 0..{domain}"
                    )));
                }
                if representative[label as usize] != u32::MAX {
                    return Err(ColoringError::Invalid(format!(
                        "label {label} appears in two classes"
                    )));
                }
                representative[label as usize] = class[0];
                class_index[label as usize] = i as u32;
            }
        }
        if representative.iter().any(|&r| r == u32::MAX) {
            return Err(ColoringError::Invalid("classes do not cover the domain".into()));
        }
        Ok(Self { k, n_k, classes, representative, class_index })
    }

    /// Builds the relation for `k` colors from generating pairs over the
    /// label domain `0..2^{ceil(log2 k)}`; the closure must yield exactly
    /// `k` classes.
    pub fn from_pairs(k: u32, pairs: &[(u32, u32)]) -> Result<Self, ColoringError> {
        let domain = 1u32 << qubits_per_vertex(k);
        Self::from_classes(k, closure(pairs, domain)?)
    }

    /// Merged-tail relation: `closure{(k-1, k), (k, k+1), ..}` so every label
    /// `>= k-1` becomes one color.
    pub fn less_than(k: u32) -> Self {
        let domain = 1u32 << qubits_per_vertex(k);
        let pairs: Vec<(u32, u32)> = (k - 1..domain - 1).map(|i| (i, i + 1)).collect();
        Self::from_pairs(k, &pairs).expect("merged-tail relation is always valid")
    }

    /// Balanced relation: all classes have at most two labels. For
    /// k in {3, 5, 6, 7} the pairings are the fixed choices the separator
    /// circuits are built for; otherwise the surplus is absorbed by pairing
    /// the highest `2 * (2^{n_k} - k)` labels as `{2i, 2i+1}` blocks (one
    /// valid convention among several).
    pub fn balanced(k: u32) -> Self {
        let n_k = qubits_per_vertex(k);
        let domain = 1u32 << n_k;
        let pairs: Vec<(u32, u32)> = match k {
            3 => vec![(2, 3)],
            5 => vec![(0, 1), (4, 5), (6, 7)],
            6 => vec![(0, 1), (4, 5)],
            7 => vec![(6, 7)],
            _ => {
                let surplus = domain - k;
                (0..surplus).map(|i| (domain - 2 - 2 * i, domain - 1 - 2 * i)).collect()
            }
        };
        Self::from_pairs(k, &pairs).expect("balanced relation is always valid")
    }

    /// The trivial relation on `2^{n_k}` labels (every label its own color),
    /// i.e. the power-of-two case `k = 2^{n_k}`.
    pub fn trivial(n_k: u32) -> Self {
        let k = 1u32 << n_k;
        Self::from_pairs(k, &[]).expect("trivial relation is always valid")
    }

    pub fn by_variant(k: u32, variant: RelationVariant) -> Self {
        match variant {
            RelationVariant::LessThan => Self::less_than(k),
            RelationVariant::Balanced => Self::balanced(k),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_k(&self) -> u32 {
        self.n_k
    }

    /// Classes sorted by smallest member; members sorted ascending.
    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn same_color(&self, i: u32, j: u32) -> bool {
        self.representative[i as usize] == self.representative[j as usize]
    }

    pub fn representative(&self, label: u32) -> u32 {
        self.representative[label as usize]
    }

    /// Color index of a label: the rank of its class among classes ordered
    /// by smallest member.
    pub fn color_of(&self, label: u32) -> u32 {
        self.class_index[label as usize]
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Decodes a full-register bitstring (MSB-first per vertex block) into a
    /// color assignment.
    pub fn decode(&self, bits: &[bool], num_vertices: usize) -> Result<Assignment, ColoringError> {
        let want = num_vertices * self.n_k as usize;
        if bits.len() != want {
            return Err(ColoringError::LengthMismatch { got: bits.len(), want });
        }
        let colors = (0..num_vertices)
            .map(|v| {
                let mut label = 0u32;
                for b in 0..self.n_k as usize {
                    label = (label << 1) | bits[v * self.n_k as usize + b] as u32;
                }
                self.color_of(label)
            })
            .collect();
        Ok(Assignment(colors))
    }

    /// Decodes a basis-state index over `num_vertices * n_k` qubits
    /// (qubit 0 is the most significant index bit).
    pub fn decode_index(&self, x: usize, num_vertices: usize) -> Assignment {
        let mask = (1usize << self.n_k) - 1;
        let colors = (0..num_vertices)
            .map(|v| {
                let shift = (num_vertices - 1 - v) * self.n_k as usize;
                self.color_of(((x >> shift) & mask) as u32)
            })
            .collect();
        Assignment(colors)
    }
}

/// The partition induced by the smallest equivalence relation containing
/// `pairs` on `{0, .., domain_size-1}` (reflexive-symmetric-transitive
/// closure, i.e. connected components). Classes come back sorted by
/// smallest member.
pub fn closure(pairs: &[(u32, u32)], domain_size: u32) -> Result<Vec<Vec<u32>>, ColoringError> {
    let n = domain_size as usize;
    let mut parent: Vec<u32> = (0..domain_size).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut root = x;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = x;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    for &(i, j) in pairs {
        if i >= domain_size || j >= domain_size {
            return Err(ColoringError::PairOutOfDomain(i, j, domain_size));
        }
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            // Smaller root wins, so representatives are class minima.
            let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
            parent[hi as usize] = lo;
        }
    }
    let mut classes: Vec<Vec<u32>> = vec![Vec::new(); n];
    for x in 0..domain_size {
        let r = find(&mut parent, x);
        classes[r as usize].push(x);
    }
    classes.retain(|c| !c.is_empty());
    classes.sort_by_key(|c| c[0]);
    Ok(classes)
}

// Serialization: `{"k": k, "classes": [[...], ...]}`.

#[derive(Serialize, Deserialize)]
struct RelationFile {
    k: u32,
    classes: Vec<Vec<u32>>,
}

impl Serialize for ColorRelation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RelationFile { k: self.k, classes: self.classes.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColorRelation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RelationFile::deserialize(d)?;
        ColorRelation::from_classes(raw.k, raw.classes).map_err(serde::de::Error::custom)
    }
}
