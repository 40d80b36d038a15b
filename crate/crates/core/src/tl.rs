//! The Temperley-Lieb algebra as planar diagrams.
//!
//! A Kauffman `n`-diagram is a non-crossing perfect matching of `2n`
//! boundary points numbered circularly: the top points `1..=n` left to right,
//! then the bottom points `n+1..=2n` right to left. With this numbering the
//! non-crossing condition is ordinary balanced parenthesization.
//!
//! Products stack the left factor on top of the right factor. Braid words are
//! read top to bottom, so `rho_A(w1 w2) = rho_A(w1) * rho_A(w2)`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::braid::BraidWord;
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::laurent::{d_poly, LaurentPoly};

pub const DEFAULT_MAX_STRANDS: usize = 10;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KauffmanDiagram {
    n: usize,
    /// 0-based partner of every boundary label.
    partner: Vec<usize>,
}

impl KauffmanDiagram {
    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n).map(|l| 2 * n - 1 - l).collect();
        Self { n, partner }
    }

    /// `E_i` (1-based): cup joining top `i, i+1`, cap joining bottom `i, i+1`.
    pub fn generator(i: usize, n: usize) -> Result<Self> {
        if i < 1 || i >= n {
            return Err(Error::GeneratorOutOfRange { index: i as i64, strands: n });
        }
        let mut d = Self::identity(n);
        let (a, b) = (i - 1, i);
        let (ba, bb) = (d.bottom(a), d.bottom(b));
        d.partner[a] = b;
        d.partner[b] = a;
        d.partner[ba] = bb;
        d.partner[bb] = ba;
        Ok(d)
    }

    /// Build from 1-based pairs; rejects anything that is not a non-crossing
    /// perfect matching of `1..=2n`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let bad = |msg: &str| Error::Braid(format!("invalid Kauffman diagram: {msg}"));
        if pairs.len() != n {
            return Err(bad("expected exactly n pairs"));
        }
        let mut partner = vec![usize::MAX; 2 * n];
        for &(a, b) in pairs {
            if a == b || a < 1 || b < 1 || a > 2 * n || b > 2 * n {
                return Err(bad("label out of range"));
            }
            for (x, y) in [(a - 1, b - 1), (b - 1, a - 1)] {
                if partner[x] != usize::MAX {
                    return Err(bad("point matched twice"));
                }
                partner[x] = y;
            }
        }
        let d = Self { n, partner };
        if !d.is_noncrossing() {
            return Err(bad("pairs cross"));
        }
        Ok(d)
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    /// Label of bottom position `j` (0-based from the left).
    fn bottom(&self, j: usize) -> usize {
        2 * self.n - 1 - j
    }

    /// Sorted 1-based pair list, the canonical form.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.n)
            .filter(|&l| l < self.partner[l])
            .map(|l| (l + 1, self.partner[l] + 1))
            .collect()
    }

    /// Balanced-parentheses check over the circular order.
    pub fn is_noncrossing(&self) -> bool {
        let mut stack = Vec::with_capacity(self.n);
        for l in 0..2 * self.n {
            let p = self.partner[l];
            if p > l {
                stack.push(l);
            } else if stack.pop() != Some(p) {
                return false;
            }
        }
        stack.is_empty()
    }

    /// Stack `self` on top of `below`; returns the fused diagram and the
    /// number of closed loops formed in the middle.
    pub fn compose(&self, below: &KauffmanDiagram) -> Result<(KauffmanDiagram, usize)> {
        if self.n != below.n {
            return Err(Error::StrandMismatch(self.n, below.n));
        }
        let n = self.n;
        let mut partner = vec![usize::MAX; 2 * n];
        let mut seam_seen = vec![false; n];

        // Follow a curve entering the middle seam at position j from `upper`
        // side (true: coming out of the top diagram's bottom edge).
        let follow = |mut j: usize, mut from_top: bool, seen: &mut Vec<bool>| -> usize {
            loop {
                seen[j] = true;
                if from_top {
                    let q = below.partner[j];
                    if q >= n {
                        return q;
                    }
                    j = q;
                    from_top = false;
                } else {
                    let q = self.partner[self.bottom(j)];
                    if q < n {
                        return q;
                    }
                    j = self.bottom(q);
                    from_top = true;
                }
                seen[j] = true;
            }
        };

        for l in 0..n {
            if partner[l] != usize::MAX {
                continue;
            }
            let p = self.partner[l];
            let end = if p < n { p } else { follow(self.bottom(p), true, &mut seam_seen) };
            partner[l] = end;
            partner[end] = l;
        }
        for l in n..2 * n {
            if partner[l] != usize::MAX {
                continue;
            }
            let p = below.partner[l];
            let end = if p >= n { p } else { follow(p, false, &mut seam_seen) };
            partner[l] = end;
            partner[end] = l;
        }

        let mut loops = 0;
        for j in 0..n {
            if !seam_seen[j] {
                loops += 1;
                // walk the closed loop through seam position j
                let mut k = j;
                loop {
                    seam_seen[k] = true;
                    let down = below.partner[k];
                    let up = self.bottom(self.partner[self.bottom(down)]);
                    seam_seen[down] = true;
                    k = up;
                    if k == j {
                        break;
                    }
                }
            }
        }
        Ok((KauffmanDiagram { n, partner }, loops))
    }

    /// Loops formed by joining top `j` to bottom `j` around the side.
    pub fn closure_loops(&self) -> usize {
        let mut dsu = DisjointSets::new(2 * self.n);
        for l in 0..2 * self.n {
            dsu.union(l, self.partner[l]);
        }
        for j in 0..self.n {
            dsu.union(j, self.bottom(j));
        }
        dsu.set_count()
    }

    /// Embed into `TL_{n+1}` by adding a vertical strand on the right.
    pub fn extend_right(&self) -> Self {
        let n = self.n;
        let m = n + 1;
        let relabel = |l: usize| if l < n { l } else { l + 2 };
        let mut partner = vec![0; 2 * m];
        for l in 0..2 * n {
            partner[relabel(l)] = relabel(self.partner[l]);
        }
        partner[n] = n + 1;
        partner[n + 1] = n;
        Self { n: m, partner }
    }

    /// All non-crossing matchings of `2n` points (Catalan many).
    pub fn enumerate(n: usize) -> Vec<Self> {
        fn rec(lo: usize, hi: usize, out: &mut Vec<Vec<(usize, usize)>>) {
            if lo >= hi {
                out.push(Vec::new());
                return;
            }
            for p in (lo + 1..hi).step_by(2) {
                let mut inner = Vec::new();
                rec(lo + 1, p, &mut inner);
                let mut outer = Vec::new();
                rec(p + 1, hi, &mut outer);
                for a in &inner {
                    for b in &outer {
                        let mut v = vec![(lo, p)];
                        v.extend_from_slice(a);
                        v.extend_from_slice(b);
                        out.push(v);
                    }
                }
            }
        }
        let mut all = Vec::new();
        rec(0, 2 * n, &mut all);
        all.into_iter()
            .map(|pairs| {
                let mut partner = vec![0; 2 * n];
                for (a, b) in pairs {
                    partner[a] = b;
                    partner[b] = a;
                }
                Self { n, partner }
            })
            .collect()
    }
}

impl fmt::Display for KauffmanDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs().iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{{{}}}", pairs.join(","))
    }
}

impl fmt::Debug for KauffmanDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{}{self}", self.n)
    }
}

/// Coefficient ring for [`TlElement`].
pub trait Coefficient:
    Clone + PartialEq + fmt::Debug + Send + Sync + Zero + One + Add<Output = Self> + Mul<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone + PartialEq + fmt::Debug + Send + Sync + Zero + One + Add<Output = T> + Mul<Output = T>
{
}

/// Formal linear combination of Kauffman diagrams. The loop value `d` lives
/// with the element so products need no extra context.
#[derive(Clone, PartialEq)]
pub struct TlElement<R: Coefficient> {
    n: usize,
    loop_value: R,
    terms: BTreeMap<KauffmanDiagram, R>,
}

pub type ExactTl = TlElement<LaurentPoly>;
pub type NumericTl = TlElement<Complex64>;

impl<R: Coefficient> TlElement<R> {
    pub fn zero(n: usize, loop_value: R) -> Self {
        Self { n, loop_value, terms: BTreeMap::new() }
    }

    pub fn from_diagram(diagram: KauffmanDiagram, coeff: R, loop_value: R) -> Self {
        let mut x = Self::zero(diagram.strands(), loop_value);
        x.add_term(diagram, coeff);
        x
    }

    pub fn identity(n: usize, loop_value: R) -> Self {
        Self::from_diagram(KauffmanDiagram::identity(n), R::one(), loop_value)
    }

    pub fn generator(i: usize, n: usize, loop_value: R) -> Result<Self> {
        Ok(Self::from_diagram(KauffmanDiagram::generator(i, n)?, R::one(), loop_value))
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn loop_value(&self) -> &R {
        &self.loop_value
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KauffmanDiagram, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, diagram: &KauffmanDiagram) -> R {
        self.terms.get(diagram).cloned().unwrap_or_else(R::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, diagram: KauffmanDiagram, coeff: R) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&diagram) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&diagram);
                }
            }
            None => {
                self.terms.insert(diagram, coeff);
            }
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(self.n, self.loop_value.clone());
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    fn loop_power(&self, loops: usize) -> R {
        let mut acc = R::one();
        for _ in 0..loops {
            acc = acc * self.loop_value.clone();
        }
        acc
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    /// Bilinear extension of diagram stacking; each closed loop contributes `d`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n, self.loop_value.clone());
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let (k3, loops) = k1.compose(k2)?;
                out.add_term(k3, c1.clone() * c2.clone() * self.loop_power(loops));
            }
        }
        Ok(out)
    }

    /// `self * (a * E_i + b * 1)`, the only product needed for braid words.
    pub fn mul_linear_generator(&self, i: usize, a: &R, b: &R) -> Result<Self> {
        let e = KauffmanDiagram::generator(i, self.n)?;
        let mut out = Self::zero(self.n, self.loop_value.clone());
        for (k, c) in &self.terms {
            let (ke, loops) = k.compose(&e)?;
            out.add_term(ke, c.clone() * a.clone() * self.loop_power(loops));
            out.add_term(k.clone(), c.clone() * b.clone());
        }
        Ok(out)
    }

    /// Embed into `TL_{n+1}`.
    pub fn extend_right(&self) -> Self {
        let mut out = Self::zero(self.n + 1, self.loop_value.clone());
        for (k, c) in &self.terms {
            out.add_term(k.extend_right(), c.clone());
        }
        out
    }

    /// `d^{n-1} tr(x) = sum_K c_K d^{a(K) - 1}`, which stays in the
    /// coefficient ring since every closure has at least one loop.
    pub fn scaled_trace(&self) -> R {
        let mut acc = R::zero();
        for (k, c) in &self.terms {
            acc = acc + c.clone() * self.loop_power(k.closure_loops() - 1);
        }
        acc
    }
}

impl<R: Coefficient> fmt::Debug for TlElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<R: Coefficient> Add for &TlElement<R> {
    type Output = TlElement<R>;
    fn add(self, rhs: &TlElement<R>) -> TlElement<R> {
        self.try_add(rhs).expect("TL elements with different strand counts")
    }
}

impl<R: Coefficient> Mul for &TlElement<R> {
    type Output = TlElement<R>;
    fn mul(self, rhs: &TlElement<R>) -> TlElement<R> {
        self.try_mul(rhs).expect("TL elements with different strand counts")
    }
}

impl ExactTl {
    pub fn exact_identity(n: usize) -> Self {
        Self::identity(n, d_poly())
    }

    pub fn exact_generator(i: usize, n: usize) -> Result<Self> {
        Self::generator(i, n, d_poly())
    }

    /// Substitute a numeric `A` into every coefficient.
    pub fn evaluate(&self, a: Complex64) -> Result<NumericTl> {
        let mut out = NumericTl::zero(self.n, d_poly().eval(a)?);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.eval(a)?);
        }
        Ok(out)
    }
}

impl NumericTl {
    /// The Markov trace itself, `d^{1-n}` times the scaled trace.
    pub fn markov_trace(&self) -> Complex64 {
        self.scaled_trace() / self.loop_value.powi(self.n as i32 - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TangleLetter {
    /// Generator index `i` and sign.
    Crossing(usize, i8),
    Capcup(usize),
}

/// A braid word in which some crossings are replaced by cap-cups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tangle {
    n: usize,
    letters: Vec<TangleLetter>,
}

impl Tangle {
    pub fn new(n: usize, letters: Vec<TangleLetter>) -> Result<Self> {
        for l in &letters {
            let (TangleLetter::Crossing(i, _) | TangleLetter::Capcup(i)) = *l;
            if i < 1 || i >= n {
                return Err(Error::GeneratorOutOfRange { index: i as i64, strands: n });
            }
        }
        Ok(Self { n, letters })
    }

    pub fn from_braid(braid: &BraidWord) -> Self {
        let letters = braid
            .word()
            .iter()
            .map(|&g| TangleLetter::Crossing(g.unsigned_abs() as usize, g.signum() as i8))
            .collect();
        Self { n: braid.strands(), letters }
    }

    /// `E_1 E_3 ... E_{n-1}` followed by the braid; its trace closure is
    /// isotopic to the braid's plat closure.
    pub fn capcups_then(braid: &BraidWord) -> Result<Self> {
        let n = braid.strands();
        if n % 2 != 0 {
            return Err(Error::OddPlat(n));
        }
        let mut letters: Vec<TangleLetter> = (1..n).step_by(2).map(TangleLetter::Capcup).collect();
        letters.extend(Self::from_braid(braid).letters);
        Ok(Self { n, letters })
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[TangleLetter] {
        &self.letters
    }
}

/// `rho_A` on tangles: `sigma_i -> A E_i + A^{-1}`, `sigma_i^{-1} -> A^{-1} E_i + A`,
/// cap-cups map to `E_i`.
pub fn rho_a_tangle(tangle: &Tangle) -> Result<ExactTl> {
    let a = LaurentPoly::var_pow(1);
    let a_inv = LaurentPoly::var_pow(-1);
    let zero = LaurentPoly::zero();
    let one = LaurentPoly::one();
    let mut x = ExactTl::exact_identity(tangle.n);
    for letter in &tangle.letters {
        x = match *letter {
            TangleLetter::Crossing(i, s) if s > 0 => x.mul_linear_generator(i, &a, &a_inv)?,
            TangleLetter::Crossing(i, _) => x.mul_linear_generator(i, &a_inv, &a)?,
            TangleLetter::Capcup(i) => x.mul_linear_generator(i, &one, &zero)?,
        };
    }
    Ok(x)
}

pub fn rho_a(braid: &BraidWord) -> Result<ExactTl> {
    rho_a_tangle(&Tangle::from_braid(braid))
}

/// Same as [`rho_a_tangle`] with `A` substituted up front; for strand counts
/// where exact coefficients get expensive.
pub fn rho_a_numeric(tangle: &Tangle, a: Complex64) -> Result<NumericTl> {
    let d = -a * a - (a * a).inv();
    let zero = Complex64::zero();
    let one = Complex64::new(1.0, 0.0);
    let mut x = NumericTl::identity(tangle.n, d);
    for letter in &tangle.letters {
        x = match *letter {
            TangleLetter::Crossing(i, s) if s > 0 => x.mul_linear_generator(i, &a, &a.inv())?,
            TangleLetter::Crossing(i, _) => x.mul_linear_generator(i, &a.inv(), &a)?,
            TangleLetter::Capcup(i) => x.mul_linear_generator(i, &one, &zero)?,
        };
    }
    Ok(x)
}

/// `(-A)^{3w} d^{n-1} tr(rho_A(T))` for a closure writhe `w`.
pub fn jones_via_trace(tangle: &Tangle, writhe: i64) -> Result<LaurentPoly> {
    jones_via_trace_with_cap(tangle, writhe, DEFAULT_MAX_STRANDS)
}

pub fn jones_via_trace_with_cap(tangle: &Tangle, writhe: i64, max_strands: usize) -> Result<LaurentPoly> {
    if tangle.n > max_strands {
        return Err(Error::CapExceeded { what: "strand count", value: tangle.n, cap: max_strands });
    }
    let rho = rho_a_tangle(tangle)?;
    Ok(&LaurentPoly::neg_a_pow(3 * writhe) * &rho.scaled_trace())
}

/// Jones polynomial of a braid's trace closure through the TL trace.
pub fn jones_braid_trace(braid: &BraidWord) -> Result<LaurentPoly> {
    jones_via_trace(&Tangle::from_braid(braid), braid.exponent_sum())
}

/// Distinct diagrams reachable from the identity by multiplying generators.
pub fn reachable_diagrams(n: usize) -> Result<usize> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let id = KauffmanDiagram::identity(n);
    seen.insert(id.clone());
    queue.push_back(id);
    let gens = (1..n).map(|i| KauffmanDiagram::generator(i, n)).collect::<Result<Vec<_>>>()?;
    while let Some(k) = queue.pop_front() {
        for g in &gens {
            let (next, _) = k.compose(g)?;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len())
}
