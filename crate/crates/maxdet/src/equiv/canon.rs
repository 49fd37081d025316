//! Canonical certificates for permutation equivalence.
//!
//! Two Hermitian matrices `G`, `H` are equivalent under symmetric
//! row-column permutations when `H = P G Pᵀ` for a permutation matrix `P`.
//! Following the classical reduction, a matrix is encoded as a
//! vertex-colored incidence graph ([`ColoredGraph`]) whose color-preserving
//! isomorphisms correspond exactly to such permutations, and a canonical
//! labeling of the graph produces a [`Certificate`]: a byte string equal
//! for two matrices if and only if they are equivalent.
//!
//! The canonical labeling is computed in-repo by iterated color refinement
//! with individualization and backtracking, pruned by automorphism orbits
//! discovered along the way. The graphs involved are tiny (at most a few
//! hundred vertices), so determinism and portability matter more than raw
//! speed here.

use std::collections::HashSet;

use num_bigint::BigInt;

use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::matrix::{GramMatrix, LogMatrix};

/// A canonical byte string naming an equivalence class.
///
/// Certificates are comparable only between graphs built over the same
/// value alphabet; the alphabet is embedded in the bytes so that
/// accidental cross-alphabet comparisons can never collide.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Lowercase hex, as embedded in report JSON.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.0.len() * 2);
        for byte in &self.0 {
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }
}

impl std::fmt::Debug for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Certificate({})", self.to_hex())
    }
}

impl serde::Serialize for Certificate {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

/// The incidence graph of a Hermitian matrix `G` of order `k` over a value
/// alphabet of size `f`.
///
/// Vertices are numbered `0..k` (rows), `k..2k` (columns), `2k..2k+f`
/// (one vertex per alphabet value, present even when the value does not
/// occur in `G`), and `2k+f..2k+f+k²` (cells, row-major). Every cell
/// `(i, j)` is joined to row `i`, to column `j`, and to the vertex of its
/// value when that value belongs to the alphabet; cells fall back to
/// degree 2 only on the diagonal, whose common value may be omitted from
/// the alphabet.
///
/// Color classes: all rows, all columns, all cells, and one singleton
/// class per alphabet value.
pub struct ColoredGraph {
    k: usize,
    alphabet: Vec<CycInt>,
    /// Row-major alphabet index per cell; `NO_COLOR` marks a diagonal cell
    /// whose value is outside the alphabet.
    cell_color: Vec<u16>,
    edges: Vec<(u32, u32)>,
}

const NO_COLOR: u16 = u16::MAX;

impl std::fmt::Debug for ColoredGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ColoredGraph(k={}, f={}, {} vertices, {} edges)",
            self.k,
            self.alphabet.len(),
            self.vertex_count(),
            self.edges.len()
        )
    }
}

impl ColoredGraph {
    /// Order of the encoded matrix.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The value alphabet, sorted and deduplicated.
    pub fn alphabet(&self) -> &[CycInt] {
        &self.alphabet
    }

    /// Total vertex count `2k + f + k²`.
    pub fn vertex_count(&self) -> usize {
        2 * self.k + self.alphabet.len() + self.k * self.k
    }

    /// All edges as vertex-id pairs.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// The color classes in order: rows, columns, cells, then one
    /// singleton per alphabet value.
    pub fn color_classes(&self) -> Vec<Vec<u32>> {
        let k = self.k as u32;
        let f = self.alphabet.len() as u32;
        let mut classes = Vec::with_capacity(3 + f as usize);
        classes.push((0..k).collect());
        classes.push((k..2 * k).collect());
        classes.push((2 * k + f..2 * k + f + k * k).collect());
        for v in 0..f {
            classes.push(vec![2 * k + v]);
        }
        classes
    }

    /// Degree of a vertex.
    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == v || *b == v)
            .count()
    }
}

fn cyc_key(v: &CycInt) -> (BigInt, BigInt) {
    (v.a().clone(), v.b().clone())
}

/// Sorts and deduplicates an alphabet; rejects basis mismatches.
fn normalize_alphabet(values: &[CycInt], g: &GramMatrix) -> Result<Vec<CycInt>> {
    let mut alphabet: Vec<CycInt> = Vec::new();
    for v in values {
        if v.basis() != g.basis() {
            return Err(Error::usage(
                "value alphabet and matrix use different rings",
            ));
        }
        alphabet.push(v.clone());
    }
    alphabet.sort_by_key(cyc_key);
    alphabet.dedup();
    if alphabet.len() >= NO_COLOR as usize {
        return Err(Error::usage("value alphabet too large"));
    }
    Ok(alphabet)
}

/// Encodes a Hermitian matrix as its vertex-colored incidence graph.
///
/// The alphabet must cover every off-diagonal value of `G`; alphabet
/// vertices are created even for values that never occur. The diagonal
/// value must not occur off the diagonal (for a positive-definite Gram
/// matrix it never does): that separation is what makes color-preserving
/// graph isomorphisms agree with symmetric permutations.
pub fn gram_to_graph(g: &GramMatrix, value_alphabet: &[CycInt]) -> Result<ColoredGraph> {
    let k = g.n();
    let alphabet = normalize_alphabet(value_alphabet, g)?;
    let lookup = |v: &CycInt| -> Option<u16> {
        alphabet
            .binary_search_by_key(&cyc_key(v), cyc_key)
            .ok()
            .map(|idx| idx as u16)
    };
    let diag = g.entry(0, 0);
    let mut cell_color = vec![NO_COLOR; k * k];
    for i in 0..k {
        for j in 0..k {
            let v = g.entry(i, j);
            if i == j {
                cell_color[i * k + j] = lookup(v).unwrap_or(NO_COLOR);
            } else {
                if v == diag {
                    return Err(Error::usage(
                        "off-diagonal entry equals the diagonal value; \
                         certificates are not defined for such matrices",
                    ));
                }
                cell_color[i * k + j] = lookup(v).ok_or_else(|| {
                    Error::usage(format!(
                        "off-diagonal value {v} is outside the value alphabet"
                    ))
                })?;
            }
        }
    }

    let f = alphabet.len();
    let cell_base = (2 * k + f) as u32;
    let mut edges = Vec::with_capacity(3 * k * k);
    for i in 0..k {
        for j in 0..k {
            let cell = cell_base + (i * k + j) as u32;
            edges.push((i as u32, cell));
            edges.push(((k + j) as u32, cell));
            let color = cell_color[i * k + j];
            if color != NO_COLOR {
                edges.push(((2 * k) as u32 + color as u32, cell));
            }
        }
    }
    Ok(ColoredGraph { k, alphabet, cell_color, edges })
}

/// Canonical certificate of the graph under color-preserving isomorphism.
///
/// Isomorphisms of the incidence graph fix every value vertex (singleton
/// colors), so they are exactly the simultaneous row-column permutations
/// of the encoded matrix; the certificate is the least relabeling of the
/// cell colors over that group, prefixed by the order and the alphabet.
pub fn canonical_certificate(graph: &ColoredGraph) -> Certificate {
    let k = graph.k;
    let color = |i: usize, j: usize| -> u16 {
        if i == j {
            0
        } else {
            // Shift by one so cell colors never collide with the
            // same-vertex marker.
            graph.cell_color[i * k + j].wrapping_add(1)
        }
    };
    let mut colors = vec![0u16; k * k];
    for i in 0..k {
        for j in 0..k {
            colors[i * k + j] = color(i, j);
        }
    }
    let emit = |order: &[usize]| -> Vec<u8> {
        let mut bytes = Vec::with_capacity(2 * k * k);
        for &i in order {
            for &j in order {
                bytes.extend_from_slice(&colors[i * k + j].to_le_bytes());
            }
        }
        bytes
    };
    let canonical = canonize(k, &colors, vec![(0..k).collect()], &emit);

    let mut bytes = Vec::new();
    bytes.extend_from_slice(b"PG1");
    bytes.extend_from_slice(&(k as u32).to_le_bytes());
    bytes.extend_from_slice(&(graph.alphabet.len() as u32).to_le_bytes());
    for v in &graph.alphabet {
        bytes.extend_from_slice(v.a().to_string().as_bytes());
        bytes.push(b',');
        bytes.extend_from_slice(v.b().to_string().as_bytes());
        bytes.push(b';');
    }
    bytes.push(0);
    bytes.extend_from_slice(&canonical);
    Certificate(bytes)
}

/// Decides `X₂ = P X₁ Q` for permutation matrices `P`, `Q`.
///
/// Both inputs must be balanced matrices over the third roots of the same
/// order: for balanced matrices, monomial equivalence collapses to
/// permutation equivalence, so this test decides the full equivalence
/// class. Encoded as a bipartite cell graph (rows and columns are
/// separate color classes, the alphabet is all of `μ₃`), canonically
/// labeled by the same engine.
pub fn permutation_equivalent(x1: &LogMatrix, x2: &LogMatrix) -> Result<bool> {
    if x1.ell() != 3 || x2.ell() != 3 {
        return Err(Error::usage(
            "permutation equivalence is defined over the third roots",
        ));
    }
    if x1.n() != x2.n() {
        return Err(Error::usage(
            "permutation equivalence requires matrices of the same order",
        ));
    }
    for (name, x) in [("first", x1), ("second", x2)] {
        if !crate::equiv::is_balanced(x)? {
            return Err(Error::usage(format!(
                "{name} matrix is not balanced; balance it first"
            )));
        }
    }
    Ok(bipartite_certificate(x1) == bipartite_certificate(x2))
}

/// Canonical bytes of a log-form matrix under independent row and column
/// permutations.
fn bipartite_certificate(m: &LogMatrix) -> Vec<u8> {
    let k = m.n();
    let nv = 2 * k;
    // Vertices 0..k are rows, k..2k are columns; the color between row i
    // and column j is the exponent shifted by one, same-side pairs are 0.
    let mut colors = vec![0u16; nv * nv];
    for i in 0..k {
        for j in 0..k {
            let c = m.exp(i, j) as u16 + 1;
            colors[i * nv + (k + j)] = c;
            colors[(k + j) * nv + i] = c;
        }
    }
    let emit = |order: &[usize]| -> Vec<u8> {
        let rows: Vec<usize> = order.iter().copied().filter(|&v| v < k).collect();
        let cols: Vec<usize> = order.iter().copied().filter(|&v| v >= k).collect();
        let mut bytes = Vec::with_capacity(k * k);
        for &i in &rows {
            for &j in &cols {
                bytes.push(m.exp(i, j - k) as u8);
            }
        }
        bytes
    };
    let initial = vec![(0..k).collect(), (k..nv).collect()];
    let mut bytes = Vec::new();
    bytes.extend_from_slice(b"PM1");
    bytes.extend_from_slice(&(k as u32).to_le_bytes());
    bytes.extend_from_slice(&canonize(nv, &colors, initial, &emit));
    bytes
}

/// Finds the least `emit` value over all labelings consistent with the
/// edge-color structure and the initial ordered partition.
///
/// `colors` is the `nv × nv` edge-color matrix; a labeling is an ordering
/// of the vertices, and two labelings yield equal `emit` bytes exactly
/// when they differ by a color-preserving automorphism (which is what
/// makes the discovered-automorphism pruning sound — `emit` must be a
/// complete invariant of the labeled structure, such as the relabeled
/// color matrix itself).
fn canonize(
    nv: usize,
    colors: &[u16],
    initial: Vec<Vec<usize>>,
    emit: &dyn Fn(&[usize]) -> Vec<u8>,
) -> Vec<u8> {
    let mut state = Canonizer {
        nv,
        colors,
        emit,
        best: None,
        automorphisms: Vec::new(),
    };
    state.recurse(initial, &[]);
    state.best.expect("canonize explored no labeling").0
}

struct Canonizer<'a> {
    nv: usize,
    colors: &'a [u16],
    emit: &'a dyn Fn(&[usize]) -> Vec<u8>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Canonizer<'_> {
    /// One vertex signature against the current partition: for each cell,
    /// the sorted multiset of (outgoing, incoming) colors into that cell.
    fn signature(&self, v: usize, partition: &[Vec<usize>]) -> Vec<Vec<(u16, u16)>> {
        partition
            .iter()
            .map(|cell| {
                let mut sig: Vec<(u16, u16)> = cell
                    .iter()
                    .filter(|&&u| u != v)
                    .map(|&u| (self.colors[v * self.nv + u], self.colors[u * self.nv + v]))
                    .collect();
                sig.sort_unstable();
                sig
            })
            .collect()
    }

    /// Iterated color refinement; splits are ordered by signature, so the
    /// refined partition depends only on the colored structure.
    fn refine(&self, partition: &mut Vec<Vec<usize>>) {
        loop {
            let mut changed = false;
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(partition.len());
            for cell in partition.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<Vec<(u16, u16)>>, usize)> = cell
                    .iter()
                    .map(|&v| (self.signature(v, partition), v))
                    .collect();
                keyed.sort();
                let mut group: Vec<usize> = vec![keyed[0].1];
                for pair in keyed.windows(2) {
                    if pair[1].0 == pair[0].0 {
                        group.push(pair[1].1);
                    } else {
                        changed = true;
                        next.push(std::mem::take(&mut group));
                        group.push(pair[1].1);
                    }
                }
                next.push(group);
            }
            *partition = next;
            if !changed {
                return;
            }
        }
    }

    fn recurse(&mut self, mut partition: Vec<Vec<usize>>, fixed: &[usize]) {
        self.refine(&mut partition);
        let target = partition.iter().position(|cell| cell.len() > 1);
        let Some(target) = target else {
            let order: Vec<usize> = partition.iter().map(|cell| cell[0]).collect();
            let bytes = (self.emit)(&order);
            match &self.best {
                None => self.best = Some((bytes, order)),
                Some((best_bytes, best_order)) => {
                    if bytes < *best_bytes {
                        self.best = Some((bytes, order));
                    } else if bytes == *best_bytes {
                        // Equal leaves differ by an automorphism; record it
                        // for orbit pruning.
                        let mut auto = vec![0usize; self.nv];
                        for (b, c) in best_order.iter().zip(&order) {
                            auto[*b] = *c;
                        }
                        self.automorphisms.push(auto);
                    }
                }
            }
            return;
        };

        // Orbits of the automorphisms that fix the individualized prefix
        // pointwise; branching on two vertices in one orbit explores
        // isomorphic subtrees, so only the first is taken.
        let mut orbit: Vec<usize> = (0..self.nv).collect();
        for auto in &self.automorphisms {
            if fixed.iter().any(|&v| auto[v] != v) {
                continue;
            }
            for v in 0..self.nv {
                union(&mut orbit, v, auto[v]);
            }
        }

        let cell = partition[target].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            let root = find(&mut orbit, v);
            if tried.contains(&root) {
                continue;
            }
            tried.push(root);
            let mut child = partition.clone();
            let rest: Vec<usize> = cell.iter().copied().filter(|&u| u != v).collect();
            child[target] = vec![v];
            child.insert(target + 1, rest);
            let mut child_fixed = fixed.to_vec();
            child_fixed.push(v);
            self.recurse(child, &child_fixed);
        }
    }
}

fn find(parent: &mut [usize], v: usize) -> usize {
    let mut root = v;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = v;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let ra = find(parent, a);
    let rb = find(parent, b);
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Convenience comparison of two Hermitian matrices under symmetric
/// permutations, using the union of their off-diagonal values as the
/// alphabet.
pub fn gram_equivalent(g1: &GramMatrix, g2: &GramMatrix) -> Result<bool> {
    if g1.n() != g2.n() || g1.basis() != g2.basis() {
        return Ok(false);
    }
    let mut alphabet: Vec<CycInt> = Vec::new();
    for g in [g1, g2] {
        for i in 0..g.n() {
            for j in 0..g.n() {
                if i != j {
                    alphabet.push(g.entry(i, j).clone());
                }
            }
        }
    }
    let c1 = canonical_certificate(&gram_to_graph(g1, &alphabet)?);
    let c2 = canonical_certificate(&gram_to_graph(g2, &alphabet)?);
    Ok(c1 == c2)
}

/// Used by tests and the search: certificates of many matrices over one
/// shared alphabet.
pub fn certificate_over(g: &GramMatrix, alphabet: &[CycInt]) -> Result<Certificate> {
    Ok(canonical_certificate(&gram_to_graph(g, alphabet)?))
}

#[allow(dead_code)]
fn debug_distinct(certs: &[Certificate]) -> usize {
    certs.iter().collect::<HashSet<_>>().len()
}
