//! Braid words, their trace and plat closures, and oriented link diagrams.
//!
//! Conventions used throughout the crate:
//!
//! * Letter `g > 0` is `sigma_g`, in which strand `g` passes OVER strand
//!   `g + 1`; `g < 0` is the inverse crossing.
//! * The first letter of a word sits at the top of the diagram.
//! * A diagram with `m` crossings has `(m + 1) * n` nodes: node `(t, j)` is
//!   the point on strand position `j` (0-based) just below crossing row
//!   `t - 1` and above row `t`. Every node has an "above" and a "below"
//!   slot, each carrying exactly one arc.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BraidWord {
    strands: usize,
    word: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, word: Vec<i32>) -> Result<Self> {
        if strands < 1 {
            return Err(Error::Braid("strand count must be at least 1".into()));
        }
        for &g in &word {
            if g == 0 {
                return Err(Error::Braid("zero is not a generator".into()));
            }
            if g.unsigned_abs() as usize > strands - 1 {
                return Err(Error::GeneratorOutOfRange {
                    index: g.unsigned_abs() as i64,
                    strands,
                });
            }
        }
        Ok(Self { strands, word })
    }

    pub fn identity(strands: usize) -> Result<Self> {
        Self::new(strands, Vec::new())
    }

    /// Accepts `"n: g1 g2 ..."` or `{"strands": n, "word": [...]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            #[derive(Deserialize)]
            struct Raw {
                strands: i64,
                word: Vec<i64>,
            }
            let raw: Raw = serde_json::from_str(trimmed).map_err(|e| Error::Braid(e.to_string()))?;
            return Self::from_raw(raw.strands, raw.word);
        }
        let (head, tail) = trimmed
            .split_once(':')
            .ok_or_else(|| Error::Braid(format!("expected \"n: g1 g2 ...\", got {trimmed:?}")))?;
        let strands: i64 = head
            .trim()
            .parse()
            .map_err(|_| Error::Braid(format!("bad strand count {:?}", head.trim())))?;
        let word = tail
            .split_whitespace()
            .map(|tok| tok.parse::<i64>().map_err(|_| Error::Braid(format!("bad letter {tok:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_raw(strands, word)
    }

    fn from_raw(strands: i64, word: Vec<i64>) -> Result<Self> {
        if strands < 1 {
            return Err(Error::Braid(format!("strand count must be at least 1, got {strands}")));
        }
        let strands = strands as usize;
        let mut letters = Vec::with_capacity(word.len());
        for g in word {
            if g == 0 {
                return Err(Error::Braid("zero is not a generator".into()));
            }
            if g.unsigned_abs() as usize >= strands {
                return Err(Error::GeneratorOutOfRange {
                    index: g.abs(),
                    strands,
                });
            }
            letters.push(g as i32);
        }
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn word(&self) -> &[i32] {
        &self.word
    }

    /// Number of crossings.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.word.iter().map(|g| g.signum() as i64).sum()
    }

    pub fn inverse(&self) -> Self {
        Self {
            strands: self.strands,
            word: self.word.iter().rev().map(|g| -g).collect(),
        }
    }

    /// `self` followed by `other`; strand counts must agree.
    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch(self.strands, other.strands));
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Ok(Self { strands: self.strands, word })
    }

    /// Same word viewed in `B_strands` for `strands >= self.strands()`.
    pub fn with_strands(&self, strands: usize) -> Result<Self> {
        Self::new(strands, self.word.clone())
    }

    pub fn close(&self, kind: ClosureKind) -> Result<LinkDiagram> {
        LinkDiagram::new(self, kind)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for g in &self.word {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl<'de> Deserialize<'de> for BraidWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            strands: i64,
            word: Vec<i64>,
        }
        let raw = Raw::deserialize(d)?;
        BraidWord::from_raw(raw.strands, raw.word).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureKind {
    Trace,
    Plat,
}

impl FromStr for ClosureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace" => Ok(Self::Trace),
            "plat" => Ok(Self::Plat),
            other => Err(Error::Braid(format!("unknown closure kind {other:?}"))),
        }
    }
}

impl fmt::Display for ClosureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Trace => "trace",
            Self::Plat => "plat",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    /// 1-based generator index `i`: the crossing swaps positions `i` and `i + 1`.
    pub generator: usize,
    pub sign: i8,
    /// Crossing row, 0 at the top.
    pub row: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Above = 0,
    Below = 1,
}

/// One arc of the diagram, joining a slot of one node to a slot of another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub from: (usize, Slot),
    pub to: (usize, Slot),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    strands: usize,
    closure: ClosureKind,
    crossings: Vec<Crossing>,
}

impl LinkDiagram {
    pub fn new(braid: &BraidWord, closure: ClosureKind) -> Result<Self> {
        if closure == ClosureKind::Plat && braid.strands() % 2 != 0 {
            return Err(Error::OddPlat(braid.strands()));
        }
        let crossings = braid
            .word()
            .iter()
            .enumerate()
            .map(|(row, &g)| Crossing {
                generator: g.unsigned_abs() as usize,
                sign: g.signum() as i8,
                row,
            })
            .collect();
        Ok(Self {
            strands: braid.strands(),
            closure,
            crossings,
        })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn closure(&self) -> ClosureKind {
        self.closure
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn node_count(&self) -> usize {
        (self.crossings.len() + 1) * self.strands
    }

    /// Index of node `(level, position)`, both 0-based.
    pub fn node(&self, level: usize, position: usize) -> usize {
        level * self.strands + position
    }

    pub fn level_position(&self, node: usize) -> (usize, usize) {
        (node / self.strands, node % self.strands)
    }

    /// Arcs closing the braid: around the side for trace closures, caps on
    /// top and cups on the bottom for plat closures.
    pub fn closure_arcs(&self) -> Vec<Arc> {
        let n = self.strands;
        let m = self.crossings.len();
        match self.closure {
            ClosureKind::Trace => (0..n)
                .map(|j| Arc {
                    from: (self.node(m, j), Slot::Below),
                    to: (self.node(0, j), Slot::Above),
                })
                .collect(),
            ClosureKind::Plat => (0..n / 2)
                .flat_map(|a| {
                    [
                        Arc {
                            from: (self.node(0, 2 * a), Slot::Above),
                            to: (self.node(0, 2 * a + 1), Slot::Above),
                        },
                        Arc {
                            from: (self.node(m, 2 * a), Slot::Below),
                            to: (self.node(m, 2 * a + 1), Slot::Below),
                        },
                    ]
                })
                .collect(),
        }
    }

    /// Vertical arcs on strands not involved in each crossing row.
    pub fn passthrough_arcs(&self) -> Vec<Arc> {
        let mut arcs = Vec::new();
        for c in &self.crossings {
            let i = c.generator - 1;
            for j in (0..self.strands).filter(|&j| j != i && j != i + 1) {
                arcs.push(self.vertical(c.row, j, j));
            }
        }
        arcs
    }

    fn vertical(&self, row: usize, top: usize, bottom: usize) -> Arc {
        Arc {
            from: (self.node(row, top), Slot::Below),
            to: (self.node(row + 1, bottom), Slot::Above),
        }
    }

    /// The two strand pieces through crossing `c`: `[over-diagonal from top
    /// position i, diagonal from top position i + 1]`.
    pub fn crossing_arcs(&self, c: &Crossing) -> [Arc; 2] {
        let i = c.generator - 1;
        [self.vertical(c.row, i, i + 1), self.vertical(c.row, i + 1, i)]
    }

    /// Arcs replacing a crossing by its identity smoothing (`capcup = false`)
    /// or its cap-cup smoothing.
    pub fn smoothing_arcs(&self, c: &Crossing, capcup: bool) -> [Arc; 2] {
        let i = c.generator - 1;
        if capcup {
            [
                Arc {
                    from: (self.node(c.row, i), Slot::Below),
                    to: (self.node(c.row, i + 1), Slot::Below),
                },
                Arc {
                    from: (self.node(c.row + 1, i), Slot::Above),
                    to: (self.node(c.row + 1, i + 1), Slot::Above),
                },
            ]
        } else {
            [self.vertical(c.row, i, i), self.vertical(c.row, i + 1, i + 1)]
        }
    }

    /// All arcs of the unresolved diagram.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut arcs = self.passthrough_arcs();
        for c in &self.crossings {
            arcs.extend(self.crossing_arcs(c));
        }
        arcs.extend(self.closure_arcs());
        arcs
    }

    /// Number of arcs incident to each `(node, slot)`; exactly one for a
    /// well-formed diagram.
    pub fn slot_degrees(&self) -> Vec<[usize; 2]> {
        let mut deg = vec![[0usize; 2]; self.node_count()];
        for arc in self.arcs() {
            deg[arc.from.0][arc.from.1 as usize] += 1;
            deg[arc.to.0][arc.to.1 as usize] += 1;
        }
        deg
    }

    pub fn component_count(&self) -> usize {
        let mut dsu = DisjointSets::new(self.node_count());
        for arc in self.arcs() {
            dsu.union(arc.from.0, arc.to.0);
        }
        dsu.set_count()
    }

    /// Orient every component canonically: starting from its leftmost node
    /// (ties broken by topmost), leaving downward.
    pub fn orient(&self) -> OrientedLinkDiagram {
        self.orient_with(&[])
    }

    /// Like [`orient`](Self::orient) but reversing the components whose index
    /// (in canonical discovery order) has `reversed[idx] == true`.
    pub fn orient_with(&self, reversed: &[bool]) -> OrientedLinkDiagram {
        let nodes = self.node_count();
        let mut link = vec![[(usize::MAX, Slot::Above); 2]; nodes];
        for arc in self.arcs() {
            link[arc.from.0][arc.from.1 as usize] = arc.to;
            link[arc.to.0][arc.to.1 as usize] = arc.from;
        }

        let mut order: Vec<usize> = (0..nodes).collect();
        order.sort_by_key(|&u| {
            let (t, j) = self.level_position(u);
            (j, t)
        });

        let mut component_of = vec![usize::MAX; nodes];
        // leaves_down[u]: whether the traversal exits node u through its below slot
        let mut leaves_down = vec![false; nodes];
        let mut components = Vec::new();
        for &start in &order {
            if component_of[start] != usize::MAX {
                continue;
            }
            let idx = components.len();
            let flip = reversed.get(idx).copied().unwrap_or(false);
            let mut cycle = Vec::new();
            let (mut u, mut exit) = (start, if flip { Slot::Above } else { Slot::Below });
            loop {
                component_of[u] = idx;
                leaves_down[u] = exit == Slot::Below;
                cycle.push(u);
                let (v, entry) = link[u][exit as usize];
                u = v;
                exit = match entry {
                    Slot::Above => Slot::Below,
                    Slot::Below => Slot::Above,
                };
                if u == start {
                    break;
                }
            }
            components.push(cycle);
        }

        let signs = self
            .crossings
            .iter()
            .map(|c| {
                let i = c.generator - 1;
                let over_down = leaves_down[self.node(c.row, i)];
                let under_down = leaves_down[self.node(c.row, i + 1)];
                crossing_sign(c.sign, over_down, under_down)
            })
            .collect();

        let orientation = (0..components.len())
            .map(|idx| if reversed.get(idx).copied().unwrap_or(false) { -1 } else { 1 })
            .collect();

        OrientedLinkDiagram {
            diagram: self.clone(),
            components,
            component_of,
            orientation,
            crossing_signs: signs,
        }
    }

    /// Canonical orientation and the resulting writhe.
    pub fn orient_and_writhe(&self) -> (OrientedLinkDiagram, i64) {
        let oriented = self.orient();
        let w = oriented.writhe();
        (oriented, w)
    }
}

/// `SIGN_TABLE[letter][first][second]`: letter 0 = positive, 1 = negative;
/// `first`/`second` are the directions of the strand pieces starting at top
/// positions `i` and `i + 1` (0 = downward, 1 = upward). The entry is +1
/// iff rotating the under-strand direction by +90 degrees gives the
/// over-strand direction.
const SIGN_TABLE: [[[i8; 2]; 2]; 2] = [[[1, -1], [-1, 1]], [[-1, 1], [1, -1]]];

fn crossing_sign(letter: i8, first_down: bool, second_down: bool) -> i8 {
    let l = usize::from(letter < 0);
    SIGN_TABLE[l][usize::from(!first_down)][usize::from(!second_down)]
}

#[derive(Clone, Debug)]
pub struct OrientedLinkDiagram {
    diagram: LinkDiagram,
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
    orientation: Vec<i8>,
    crossing_signs: Vec<i8>,
}

impl OrientedLinkDiagram {
    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    /// Node sequences of each component in traversal order.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, node: usize) -> usize {
        self.component_of[node]
    }

    /// +1 for canonical orientation, -1 where reversed.
    pub fn orientation(&self) -> &[i8] {
        &self.orientation
    }

    pub fn crossing_signs(&self) -> &[i8] {
        &self.crossing_signs
    }

    pub fn writhe(&self) -> i64 {
        self.crossing_signs.iter().map(|&s| s as i64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(text: &str) -> BraidWord {
        BraidWord::parse(text).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(b("2: 1 1 1"), BraidWord::new(2, vec![1, 1, 1]).unwrap());
        assert_eq!(b("4: 1 -2 3").word(), &[1, -2, 3]);
        assert!(matches!(
            BraidWord::parse("2: 3"),
            Err(Error::GeneratorOutOfRange { index: 3, strands: 2 })
        ));
        assert!(BraidWord::parse("3: 1 0").is_err());
        assert!(BraidWord::parse("0:").is_err());
        assert!(BraidWord::parse("-2: 1").is_err());
        assert!(BraidWord::parse("3 1 2").is_err());
        assert!(BraidWord::parse("3: 1 x").is_err());
        assert_eq!(b("1:").len(), 0);
    }

    #[test]
    fn parse_json() {
        assert_eq!(b(r#"{"strands": 4, "word": [1, -2, 3]}"#), b("4: 1 -2 3"));
        assert!(BraidWord::parse(r#"{"strands": 2, "word": [2]}"#).is_err());
        let round: BraidWord = serde_json::from_str(&serde_json::to_string(&b("3: 2 -1")).unwrap()).unwrap();
        assert_eq!(round, b("3: 2 -1"));
        assert_eq!(b("3: 2 -1").to_string(), "3: 2 -1");
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(b("2: 1 1 1").exponent_sum(), 3);
        assert_eq!(b("2:").exponent_sum(), 0);
        assert_eq!(b("4: 1 -2 3 -3").exponent_sum(), 0);
    }

    #[test]
    fn closures_and_components() {
        let unknot = b("1:").close(ClosureKind::Trace).unwrap();
        assert_eq!(unknot.component_count(), 1);
        assert_eq!(unknot.crossing_count(), 0);

        let kink = b("2: 1").close(ClosureKind::Trace).unwrap();
        assert_eq!(kink.component_count(), 1);
        assert_eq!(kink.crossing_count(), 1);

        let plat = b("2:").close(ClosureKind::Plat).unwrap();
        assert_eq!(plat.component_count(), 1);

        assert_eq!(b("3:").close(ClosureKind::Trace).unwrap().component_count(), 3);
        assert_eq!(b("2: 1 1").close(ClosureKind::Trace).unwrap().component_count(), 2);
        assert_eq!(b("3: 1").close(ClosureKind::Plat), Err(Error::OddPlat(3)));
    }

    #[test]
    fn every_slot_has_one_arc() {
        for text in ["1:", "3: 1 -2 1 2", "4: 2 2 -3 1", "2: 1 1 1"] {
            for kind in [ClosureKind::Trace, ClosureKind::Plat] {
                let Ok(d) = b(text).close(kind) else { continue };
                assert!(d.slot_degrees().iter().all(|s| *s == [1, 1]), "{text} {kind}");
            }
        }
    }

    #[test]
    fn writhe_examples() {
        let (_, w) = b("2: 1 1 1").close(ClosureKind::Trace).unwrap().orient_and_writhe();
        assert_eq!(w, 3);
        let (_, w) = b("3:").close(ClosureKind::Trace).unwrap().orient_and_writhe();
        assert_eq!(w, 0);
        // Plat closure of sigma_2 in B_4 is a one-crossing unknot. Traversal
        // from node (0,0): down position 1, along the bottom cup, then up
        // through the crossing to the top of position 3, along the cap, down
        // position 4, the cup, and up through the crossing again. Both pieces
        // are traversed upward, so the sign equals the letter's: +1.
        let (o, w) = b("4: 2").close(ClosureKind::Plat).unwrap().orient_and_writhe();
        assert_eq!(o.components().len(), 1);
        assert_eq!(w, 1);
        let (_, w) = b("4: -2").close(ClosureKind::Plat).unwrap().orient_and_writhe();
        assert_eq!(w, -1);
    }

    #[test]
    fn sign_table_matches_rotation_rule() {
        // Screen coordinates (y up). Piece from top position i runs towards
        // (+1, -1) when traversed downward; the other piece towards (-1, -1).
        let rot = |(x, y): (i32, i32)| (-y, x);
        for letter in [1i8, -1] {
            for first_down in [true, false] {
                for second_down in [true, false] {
                    let first = if first_down { (1, -1) } else { (-1, 1) };
                    let second = if second_down { (-1, -1) } else { (1, 1) };
                    let (over, under) = if letter > 0 { (first, second) } else { (second, first) };
                    let expected = if rot(under) == over { 1 } else { -1 };
                    assert_eq!(crossing_sign(letter, first_down, second_down), expected);
                }
            }
        }
    }

    #[test]
    fn reversing_a_component_of_hopf_link_flips_writhe() {
        let d = b("2: 1 1").close(ClosureKind::Trace).unwrap();
        assert_eq!(d.orient().writhe(), 2);
        assert_eq!(d.orient_with(&[false, true]).writhe(), -2);
        assert_eq!(d.orient_with(&[true, true]).writhe(), 2);
    }
}
