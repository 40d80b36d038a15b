//! Brute-force Kauffman bracket: a sum over all `2^m` crossing smoothings.
//!
//! This is the reference oracle for everything else in the crate, so it is
//! deliberately direct: every state is resolved and its loops counted with a
//! fresh union-find pass.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::braid::{BraidWord, ClosureKind, LinkDiagram};
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::laurent::{d_poly, unit_a, LaurentPoly};

pub const DEFAULT_MAX_CROSSINGS: usize = 24;

/// Bit `c` set means crossing `c` is smoothed as a cap-cup, clear means the
/// identity smoothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResolutionState {
    bits: u64,
    crossings: usize,
}

impl ResolutionState {
    pub fn new(bits: u64, crossings: usize) -> Self {
        debug_assert!(crossings <= 64);
        let mask = if crossings == 64 { u64::MAX } else { (1u64 << crossings) - 1 };
        Self { bits: bits & mask, crossings }
    }

    pub fn is_capcup(&self, crossing: usize) -> bool {
        self.bits >> crossing & 1 == 1
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// `sigma^+ - sigma^-`: +1 for each A-smoothing, -1 for each
    /// A^{-1}-smoothing. The cap-cup smoothing of a positive letter carries A.
    pub fn a_exponent(&self, d: &LinkDiagram) -> i64 {
        d.crossings()
            .iter()
            .enumerate()
            .map(|(c, x)| if self.is_capcup(c) { x.sign as i64 } else { -(x.sign as i64) })
            .sum()
    }
}

struct LoopCounter<'a> {
    diagram: &'a LinkDiagram,
    base: DisjointSets,
}

impl<'a> LoopCounter<'a> {
    fn new(diagram: &'a LinkDiagram) -> Self {
        let mut base = DisjointSets::new(diagram.node_count());
        for arc in diagram.passthrough_arcs().into_iter().chain(diagram.closure_arcs()) {
            base.union(arc.from.0, arc.to.0);
        }
        Self { diagram, base }
    }

    fn count(&self, state: ResolutionState) -> usize {
        let mut dsu = self.base.clone();
        for (c, crossing) in self.diagram.crossings().iter().enumerate() {
            for arc in self.diagram.smoothing_arcs(crossing, state.is_capcup(c)) {
                dsu.union(arc.from.0, arc.to.0);
            }
        }
        dsu.set_count()
    }
}

/// Number of closed loops after smoothing every crossing per `state`.
pub fn loops(diagram: &LinkDiagram, state: ResolutionState) -> usize {
    LoopCounter::new(diagram).count(state)
}

pub fn bracket(diagram: &LinkDiagram) -> Result<LaurentPoly> {
    bracket_with_cap(diagram, DEFAULT_MAX_CROSSINGS)
}

pub fn bracket_with_cap(diagram: &LinkDiagram, max_crossings: usize) -> Result<LaurentPoly> {
    let m = diagram.crossing_count();
    if m > max_crossings || m >= 63 {
        return Err(Error::CapExceeded {
            what: "crossing count",
            value: m,
            cap: max_crossings.min(62),
        });
    }
    let counter = LoopCounter::new(diagram);
    let total: u64 = 1 << m;
    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);

    // (A-exponent, loop count) -> number of states
    let tally: BTreeMap<(i64, usize), u64> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut local = BTreeMap::new();
            for bits in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                let state = ResolutionState::new(bits, m);
                let key = (state.a_exponent(diagram), counter.count(state));
                *local.entry(key).or_insert(0u64) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    let d = d_poly();
    let mut d_powers: Vec<LaurentPoly> = vec![LaurentPoly::one()];
    let mut out = LaurentPoly::zero();
    for ((exp, loops), count) in tally {
        while d_powers.len() < loops {
            let next = d_powers.last().unwrap() * &d;
            d_powers.push(next);
        }
        out += &(&d_powers[loops - 1] * &LaurentPoly::monomial(count, exp));
    }
    Ok(out)
}

/// `(-A)^{3w} <L>` with the writhe of the canonical orientation.
pub fn jones_exact(diagram: &LinkDiagram) -> Result<LaurentPoly> {
    jones_exact_with_cap(diagram, DEFAULT_MAX_CROSSINGS)
}

pub fn jones_exact_with_cap(diagram: &LinkDiagram, max_crossings: usize) -> Result<LaurentPoly> {
    let br = bracket_with_cap(diagram, max_crossings)?;
    let (_, w) = diagram.orient_and_writhe();
    Ok(&LaurentPoly::neg_a_pow(3 * w) * &br)
}

/// The Jones polynomial at `t = A^{-4} = exp(2 pi i / k)`.
pub fn jones_value(braid: &BraidWord, kind: ClosureKind, k: u32) -> Result<Complex64> {
    let a = unit_a(k)?;
    jones_exact(&braid.close(kind)?)?.eval(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(text: &str, kind: ClosureKind) -> LinkDiagram {
        BraidWord::parse(text).unwrap().close(kind).unwrap()
    }

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn loop_counts() {
        let d = diagram("2: 1", ClosureKind::Trace);
        assert_eq!(loops(&d, ResolutionState::new(1, 1)), 1);
        assert_eq!(loops(&d, ResolutionState::new(0, 1)), 2);
        let d = diagram("3:", ClosureKind::Trace);
        assert_eq!(loops(&d, ResolutionState::new(0, 0)), 3);
    }

    #[test]
    fn known_brackets() {
        assert_eq!(bracket(&diagram("1:", ClosureKind::Trace)).unwrap(), LaurentPoly::one());
        assert_eq!(bracket(&diagram("2: 1", ClosureKind::Trace)).unwrap(), poly(&[(-3, -1)]));
        assert_eq!(
            bracket(&diagram("2: 1 1 1", ClosureKind::Trace)).unwrap(),
            poly(&[(7, 1), (3, -1), (-5, -1)])
        );
    }

    #[test]
    fn known_jones() {
        assert_eq!(jones_exact(&diagram("1:", ClosureKind::Trace)).unwrap(), LaurentPoly::one());
        assert_eq!(jones_exact(&diagram("2: 1", ClosureKind::Trace)).unwrap(), LaurentPoly::one());
        // -t^-4 + t^-3 + t^-1 with t = A^-4
        assert_eq!(
            jones_exact(&diagram("2: 1 1 1", ClosureKind::Trace)).unwrap(),
            poly(&[(16, -1), (12, 1), (4, 1)])
        );
        assert_eq!(
            jones_exact(&diagram("2: 1 1", ClosureKind::Trace)).unwrap(),
            poly(&[(10, -1), (2, -1)])
        );
        assert_eq!(jones_exact(&diagram("2:", ClosureKind::Plat)).unwrap(), LaurentPoly::one());
        assert_eq!(jones_exact(&diagram("4: 2", ClosureKind::Plat)).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn trefoil_value_at_k5() {
        let b = BraidWord::parse("2: 1 1 1").unwrap();
        let v = jones_value(&b, ClosureKind::Trace, 5).unwrap();
        let t = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        let expected = -t.powi(-4) + t.powi(-3) + t.powi(-1);
        assert!((v - expected).norm() < 1e-12);
        let u = jones_value(&BraidWord::parse("1:").unwrap(), ClosureKind::Trace, 7).unwrap();
        assert!((u - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reidemeister_two_and_disjoint_circle() {
        let base = bracket(&diagram("3: 1 -2 1", ClosureKind::Trace)).unwrap();
        let r2 = bracket(&diagram("3: 1 2 -2 -2 1", ClosureKind::Trace)).unwrap();
        assert_eq!(base, r2);
        let extra = bracket(&diagram("4: 1 -2 1", ClosureKind::Trace)).unwrap();
        assert_eq!(extra, &base * &d_poly());
    }

    #[test]
    fn cap_is_enforced() {
        let d = diagram("2: 1 1 1 1", ClosureKind::Trace);
        assert!(matches!(bracket_with_cap(&d, 3), Err(Error::CapExceeded { .. })));
        assert!(bracket_with_cap(&d, 4).is_ok());
    }

    #[test]
    fn parallel_chunks_match_small_serial_sum() {
        // 14 crossings spans several chunks
        let d = diagram("3: 1 -2 1 2 2 -1 1 -2 -2 1 2 -1 1 2", ClosureKind::Trace);
        let counter = LoopCounter::new(&d);
        let mut serial = LaurentPoly::zero();
        for bits in 0..1u64 << 14 {
            let s = ResolutionState::new(bits, 14);
            serial += &(&LaurentPoly::var_pow(s.a_exponent(&d)) * &d_poly().pow(counter.count(s) as u32 - 1));
        }
        assert_eq!(bracket(&d).unwrap(), serial);
    }
}
