//! The path-model representation of `TL_n(d)` and `B_n` on bitstrings.
//!
//! A path is an `n`-bit string read left to right: bit 1 steps right, bit 0
//! steps left, starting at vertex 1 of the line graph with vertices
//! `1..=k-1`. Only strings that never leave the graph are basis states.
//! Operators are stored block-diagonally by the path's final vertex.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::laurent::unit_a;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Paths longer than this do not fit the bit encoding.
pub const MAX_PATH_LENGTH: usize = 62;

#[derive(Clone, Debug, PartialEq)]
pub struct PathBasis {
    n: usize,
    k: u32,
    /// Step `s` (1-based) is stored at bit `n - s`, so numeric order is
    /// lexicographic order of the strings.
    paths: Vec<u64>,
    endpoints: Vec<usize>,
    blocks: BTreeMap<usize, Vec<usize>>,
    offset_in_block: Vec<usize>,
    index: HashMap<u64, usize>,
}

impl PathBasis {
    pub fn enumerate(n: usize, k: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        if n < 1 || n > MAX_PATH_LENGTH {
            return Err(Error::CapExceeded { what: "path length", value: n, cap: MAX_PATH_LENGTH });
        }
        let top = k as i64 - 1;
        let mut paths = Vec::new();
        let mut stack = vec![(0usize, 0u64, 1i64)];
        // depth-first with the 0-branch explored first yields ascending order
        while let Some((len, bits, pos)) = stack.pop() {
            if len == n {
                paths.push(bits);
                continue;
            }
            for bit in [1u64, 0] {
                let next = pos + if bit == 1 { 1 } else { -1 };
                if (1..=top).contains(&next) {
                    stack.push((len + 1, bits << 1 | bit, next));
                }
            }
        }
        let endpoints: Vec<usize> = paths.iter().map(|&p| walk(p, n, n) as usize).collect();
        let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut offset_in_block = vec![0; paths.len()];
        for (idx, &l) in endpoints.iter().enumerate() {
            let block = blocks.entry(l).or_default();
            offset_in_block[idx] = block.len();
            block.push(idx);
        }
        let index = paths.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(Self { n, k, paths, endpoints, blocks, offset_in_block, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[u64] {
        &self.paths
    }

    pub fn path(&self, idx: usize) -> u64 {
        self.paths[idx]
    }

    pub fn index_of(&self, path: u64) -> Option<usize> {
        self.index.get(&path).copied()
    }

    /// Final vertex `l(p)`.
    pub fn endpoint(&self, idx: usize) -> usize {
        self.endpoints[idx]
    }

    /// Endpoint -> basis indices, ascending.
    pub fn blocks(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.blocks
    }

    pub fn block_dim(&self, endpoint: usize) -> usize {
        self.blocks.get(&endpoint).map_or(0, Vec::len)
    }

    pub fn offset_in_block(&self, idx: usize) -> usize {
        self.offset_in_block[idx]
    }

    /// `z_i = l(p|_i)`: the vertex reached after the first `i - 1` steps.
    pub fn prefix_position(&self, idx: usize, i: usize) -> usize {
        walk(self.paths[idx], self.n, i - 1) as usize
    }

    /// Bit `s` (1-based) of a path.
    pub fn step(&self, path: u64, s: usize) -> bool {
        path >> (self.n - s) & 1 == 1
    }

    pub fn path_string(&self, idx: usize) -> String {
        bits_to_string(self.paths[idx], self.n)
    }

    pub fn parse_path(&self, text: &str) -> Result<usize> {
        if text.len() != self.n || !text.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::NotAPath(text.to_string()));
        }
        let bits = u64::from_str_radix(text, 2).map_err(|_| Error::NotAPath(text.to_string()))?;
        self.index_of(bits).ok_or_else(|| Error::NotAPath(text.to_string()))
    }

    /// `|1010...10>` (requires even `n`).
    pub fn alternating_index(&self) -> Result<usize> {
        if self.n % 2 != 0 {
            return Err(Error::OddPlat(self.n));
        }
        let bits = (0..self.n / 2).fold(0u64, |acc, _| acc << 2 | 0b10);
        self.index_of(bits).ok_or_else(|| Error::NotAPath(bits_to_string(bits, self.n)))
    }
}

pub fn bits_to_string(bits: u64, n: usize) -> String {
    (1..=n).map(|s| if bits >> (n - s) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Vertex after the first `steps` steps of `path`.
fn walk(path: u64, n: usize, steps: usize) -> i64 {
    (1..=steps).fold(1i64, |pos, s| pos + if path >> (n - s) & 1 == 1 { 1 } else { -1 })
}

/// `S[i][j] = |P_{i,k,j}|` for `0 <= i <= n`, `0 <= j <= k`; entries outside
/// the graph stay zero.
pub fn path_counts(n: usize, k: u32) -> Result<Vec<Vec<u128>>> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    let k = k as usize;
    let mut s = vec![vec![0u128; k + 1]; n + 1];
    s[0][1] = 1;
    for i in 1..=n {
        for j in 1..k {
            s[i][j] = s[i - 1][j - 1] + if j + 1 < k { s[i - 1][j + 1] } else { 0 };
        }
    }
    Ok(s)
}

/// `lambda_l = sin(pi l / k)` and the local cap/cup coefficients built from it.
///
/// `a_l = c_l = sqrt(lambda_l / lambda_{l-1})` and `b_l = d_l = 1 / a_{l-1}
/// = sqrt(lambda_{l-2} / lambda_{l-1})`; all real, so the conjugation
/// conditions hold trivially. Undefined entries (division by a zero weight)
/// are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    k: u32,
    lambda: Vec<f64>,
    d: f64,
}

impl CoefficientTable {
    pub fn new(k: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        let lambda = (0..=k)
            .map(|l| if l == 0 || l == k { 0.0 } else { (PI * l as f64 / k as f64).sin() })
            .collect();
        Ok(Self { k, lambda, d: 2.0 * (PI / k as f64).cos() })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Loop value `2cos(pi/k)`.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// `lambda_j`, zero outside `1..=k-1`.
    pub fn lambda(&self, j: i64) -> f64 {
        if j < 1 || j >= self.k as i64 {
            0.0
        } else {
            self.lambda[j as usize]
        }
    }

    fn ratio_sqrt(&self, num: i64, den: i64) -> Option<f64> {
        let den = self.lambda(den);
        (den != 0.0).then(|| (self.lambda(num) / den).sqrt())
    }

    pub fn a(&self, l: i64) -> Option<f64> {
        self.ratio_sqrt(l, l - 1)
    }

    pub fn c(&self, l: i64) -> Option<f64> {
        self.a(l)
    }

    pub fn b(&self, l: i64) -> Option<f64> {
        self.ratio_sqrt(l - 2, l - 1)
    }

    pub fn d_coeff(&self, l: i64) -> Option<f64> {
        self.b(l)
    }

    /// Local action of `Phi_i` on the two bits `(i, i+1)` given `z_i`:
    /// returns `[[<01|Phi|01>, <01|Phi|10>], [<10|Phi|01>, <10|Phi|10>]]`.
    /// Written as products of one cap and one cup coefficient at `z + 1`.
    pub fn local_phi(&self, z: usize) -> [[f64; 2]; 2] {
        let l = z as i64 + 1;
        let a = self.a(l).unwrap_or(0.0);
        let b = self.b(l).unwrap_or(0.0);
        let (c, d) = (a, b);
        // down-up (01): b*d; up-down (10): a*c; mixed: a*d = b*c
        [[b * d, a * d], [b * c, a * c]]
    }

    /// `N = sum_l lambda_l dim H_{n,k,l}`.
    pub fn normalization(&self, basis: &PathBasis) -> f64 {
        basis
            .blocks()
            .iter()
            .map(|(&l, idx)| self.lambda(l as i64) * idx.len() as f64)
            .sum()
    }
}

pub fn normalization_n(n: usize, k: u32) -> Result<f64> {
    Ok(CoefficientTable::new(k)?.normalization(&PathBasis::enumerate(n, k)?))
}

/// A block-diagonal operator on `H_{n,k}`: one dense matrix per endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperator {
    basis: Arc<PathBasis>,
    blocks: BTreeMap<usize, CMatrix>,
}

impl BlockOperator {
    pub fn identity(basis: Arc<PathBasis>) -> Self {
        let blocks = basis.blocks().iter().map(|(&l, idx)| (l, CMatrix::identity(idx.len(), idx.len()))).collect();
        Self { basis, blocks }
    }

    pub fn zero(basis: Arc<PathBasis>) -> Self {
        let blocks = basis.blocks().iter().map(|(&l, idx)| (l, CMatrix::zeros(idx.len(), idx.len()))).collect();
        Self { basis, blocks }
    }

    /// Split a dense operator on `H_{n,k}` into blocks; `None` if it has a
    /// nonzero entry between different endpoints.
    pub fn from_dense(basis: Arc<PathBasis>, dense: &CMatrix) -> Option<Self> {
        for r in 0..basis.len() {
            for c in 0..basis.len() {
                if basis.endpoint(r) != basis.endpoint(c) && dense[(r, c)] != ZERO {
                    return None;
                }
            }
        }
        let blocks = basis
            .blocks()
            .iter()
            .map(|(&l, idx)| (l, CMatrix::from_fn(idx.len(), idx.len(), |r, c| dense[(idx[r], idx[c])])))
            .collect();
        Some(Self { basis, blocks })
    }

    pub fn basis(&self) -> &Arc<PathBasis> {
        &self.basis
    }

    pub fn blocks(&self) -> &BTreeMap<usize, CMatrix> {
        &self.blocks
    }

    pub fn block(&self, endpoint: usize) -> Option<&CMatrix> {
        self.blocks.get(&endpoint)
    }

    /// Entry `<row|W|col>` by global basis index.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let b = &self.basis;
        if b.endpoint(row) != b.endpoint(col) {
            return ZERO;
        }
        self.blocks[&b.endpoint(row)][(b.offset_in_block(row), b.offset_in_block(col))]
    }

    pub fn to_dense(&self) -> CMatrix {
        let dim = self.basis.len();
        let mut out = CMatrix::zeros(dim, dim);
        for (l, m) in &self.blocks {
            let idx = &self.basis.blocks()[l];
            for (r, &gr) in idx.iter().enumerate() {
                for (c, &gc) in idx.iter().enumerate() {
                    out[(gr, gc)] = m[(r, c)];
                }
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch { expected: self.basis.len(), got: other.basis.len() });
        }
        let blocks = self.blocks.iter().map(|(l, m)| (*l, f(m, &other.blocks[l]))).collect();
        Ok(Self { basis: self.basis.clone(), blocks })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let blocks = self.blocks.iter().map(|(l, m)| (*l, m * c)).collect();
        Self { basis: self.basis.clone(), blocks }
    }

    pub fn adjoint(&self) -> Self {
        let blocks = self.blocks.iter().map(|(l, m)| (*l, m.adjoint())).collect();
        Self { basis: self.basis.clone(), blocks }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.blocks.values().flat_map(|m| m.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value over all blocks.
    pub fn operator_norm(&self) -> f64 {
        self.blocks
            .values()
            .filter(|m| !m.is_empty())
            .map(|m| m.singular_values().max())
            .fold(0.0, f64::max)
    }

    /// `Tr_n(W) = (1/N) sum_l lambda_l Tr(W|_l)`.
    pub fn weighted_trace(&self, table: &CoefficientTable) -> Complex64 {
        let norm = table.normalization(&self.basis);
        let sum: Complex64 = self.blocks.iter().map(|(&l, m)| m.trace() * table.lambda(l as i64)).sum();
        sum / norm
    }
}

/// `Phi_i` as a block operator.
pub fn phi_e(i: usize, basis: &Arc<PathBasis>, table: &CoefficientTable) -> Result<BlockOperator> {
    let n = basis.n();
    if i < 1 || i >= n {
        return Err(Error::GeneratorOutOfRange { index: i as i64, strands: n });
    }
    let mut op = BlockOperator::zero(basis.clone());
    let shift = n - i - 1;
    for idx in 0..basis.len() {
        let p = basis.path(idx);
        let pair = (p >> shift) & 0b11;
        if pair == 0b00 || pair == 0b11 {
            continue;
        }
        let local = table.local_phi(basis.prefix_position(idx, i));
        let swapped = p ^ (0b11 << shift);
        // column idx: Phi|p> = local[.][col] components on |01>,|10>
        let col = usize::from(pair == 0b10);
        let block = op.blocks.get_mut(&basis.endpoint(idx)).expect("endpoint block");
        let oc = basis.offset_in_block(idx);
        block[(oc, oc)] = Complex64::new(local[col][col], 0.0);
        let off = local[1 - col][col];
        if off != 0.0 {
            let j = basis.index_of(swapped).expect("nonzero amplitude only on admissible paths");
            block[(basis.offset_in_block(j), oc)] = Complex64::new(off, 0.0);
        }
    }
    Ok(op)
}

/// `A Phi_i + A^{-1}` for `sign = +1`, `A^{-1} Phi_i + A` for `sign = -1`.
pub fn phi_sigma(i: usize, sign: i8, basis: &Arc<PathBasis>, table: &CoefficientTable) -> Result<BlockOperator> {
    let a = unit_a(table.k())?;
    let (x, y) = if sign > 0 { (a, a.inv()) } else { (a.inv(), a) };
    let phi = phi_e(i, basis, table)?;
    phi.scale(x).add(&BlockOperator::identity(basis.clone()).scale(y))
}

/// `phi(B)` assembled as a product of block operators.
pub fn phi_braid(braid: &BraidWord, basis: &Arc<PathBasis>, table: &CoefficientTable) -> Result<BlockOperator> {
    if braid.strands() != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), got: braid.strands() });
    }
    let mut acc = BlockOperator::identity(basis.clone());
    for &g in braid.word() {
        acc = acc.mul(&phi_sigma(g.unsigned_abs() as usize, g.signum() as i8, basis, table)?)?;
    }
    Ok(acc)
}

/// Apply one crossing in place. Only amplitude pairs whose bits `(i, i+1)`
/// are `01`/`10` mix; `00`/`11` pick up the identity coefficient.
pub fn apply_crossing(
    i: usize,
    sign: i8,
    basis: &PathBasis,
    table: &CoefficientTable,
    state: &mut [Complex64],
) -> Result<()> {
    let n = basis.n();
    if state.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), got: state.len() });
    }
    if i < 1 || i >= n {
        return Err(Error::GeneratorOutOfRange { index: i as i64, strands: n });
    }
    let a = unit_a(table.k())?;
    let (x, y) = if sign > 0 { (a, a.inv()) } else { (a.inv(), a) };
    let shift = n - i - 1;
    for idx in 0..basis.len() {
        let p = basis.path(idx);
        match (p >> shift) & 0b11 {
            0b00 | 0b11 => state[idx] *= y,
            0b01 => {
                let local = table.local_phi(basis.prefix_position(idx, i));
                let partner = basis.index_of(p ^ (0b11 << shift));
                let (u, v) = (state[idx], partner.map_or(ZERO, |j| state[j]));
                state[idx] = x * (local[0][0] * u + local[0][1] * v) + y * u;
                if let Some(j) = partner {
                    state[j] = x * (local[1][0] * u + local[1][1] * v) + y * v;
                }
            }
            _ => {
                // `10` with no admissible `01` partner; pairs are handled from the `01` side
                if basis.index_of(p ^ (0b11 << shift)).is_none() {
                    let local = table.local_phi(basis.prefix_position(idx, i));
                    state[idx] = x * local[1][1] * state[idx] + y * state[idx];
                }
            }
        }
    }
    Ok(())
}

/// `phi(B) v`, applying the word's letters last-to-first so the result
/// matches the operator product `phi(g_1) ... phi(g_m)`.
pub fn apply_braid(
    braid: &BraidWord,
    basis: &PathBasis,
    table: &CoefficientTable,
    state: &[Complex64],
) -> Result<Vec<Complex64>> {
    if braid.strands() != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), got: braid.strands() });
    }
    let mut v = state.to_vec();
    for &g in braid.word().iter().rev() {
        apply_crossing(g.unsigned_abs() as usize, g.signum() as i8, basis, table, &mut v)?;
    }
    Ok(v)
}

/// `<p| phi(B) |p>`.
pub fn diagonal_amplitude(braid: &BraidWord, basis: &PathBasis, table: &CoefficientTable, idx: usize) -> Result<Complex64> {
    let mut e = vec![ZERO; basis.len()];
    e[idx] = ONE;
    Ok(apply_braid(braid, basis, table, &e)?[idx])
}
