//! Combinatorial model of a convex point set.
//!
//! Points are the indices `0..size` in counterclockwise order along the hull.
//! Every predicate is a cyclic-order computation; there are no coordinates.

use crate::error::{Error, Result};
use std::fmt;

/// Largest supported point count. Chord sets are packed into a `u128`.
pub const MAX_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConvexConfig {
    size: usize,
}

/// A segment between two points, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chord {
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    PerimeterEven,
    PerimeterOdd,
    Diagonal,
}

/// Parity label of a perimeter edge `{i, i+1}`: the parity of `i`.
/// Odd edges are drawn blue, even edges red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(i: usize) -> Parity {
        if i.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl Chord {
    /// Builds a normalized chord without range checks.
    pub fn new(x: usize, y: usize) -> Chord {
        debug_assert_ne!(x, y);
        if x < y {
            Chord { a: x, b: y }
        } else {
            Chord { a: y, b: x }
        }
    }

    pub fn contains(&self, p: usize) -> bool {
        self.a == p || self.b == p
    }

    pub fn other(&self, p: usize) -> usize {
        if self.a == p {
            self.b
        } else {
            self.a
        }
    }

    pub fn shares_endpoint(&self, other: &Chord) -> bool {
        self.contains(other.a) || self.contains(other.b)
    }

    /// Position in the triangular enumeration of all chords; independent of
    /// the point count.
    pub fn index(&self) -> usize {
        self.b * (self.b - 1) / 2 + self.a
    }

    pub fn from_index(idx: usize) -> Chord {
        let mut b = 1;
        while (b + 1) * b / 2 <= idx {
            b += 1;
        }
        Chord {
            a: idx - b * (b - 1) / 2,
            b,
        }
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Proper crossing of two normalized chords on a convex set.
#[inline]
pub fn cross(e1: Chord, e2: Chord) -> bool {
    (e1.a < e2.a && e2.a < e1.b && e1.b < e2.b) || (e2.a < e1.a && e1.a < e2.b && e2.b < e1.b)
}

impl ConvexConfig {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 || !size.is_multiple_of(2) {
            return Err(Error::BadSize(size));
        }
        if size > MAX_POINTS {
            return Err(Error::TooLarge {
                size,
                max: MAX_POINTS,
            });
        }
        Ok(ConvexConfig { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of matching edges, `n` for `2n` points.
    pub fn half(&self) -> usize {
        self.size / 2
    }

    pub fn check_point(&self, p: usize) -> Result<()> {
        if p >= self.size {
            Err(Error::IndexOutOfRange {
                index: p,
                size: self.size,
            })
        } else {
            Ok(())
        }
    }

    pub fn chord(&self, x: usize, y: usize) -> Result<Chord> {
        self.check_point(x)?;
        self.check_point(y)?;
        if x == y {
            return Err(Error::DegenerateChord(x));
        }
        Ok(Chord::new(x, y))
    }

    pub fn check_chord(&self, c: Chord) -> Result<()> {
        self.check_point(c.a)?;
        self.check_point(c.b)?;
        if c.a >= c.b {
            return Err(Error::DegenerateChord(c.a));
        }
        Ok(())
    }

    pub fn next(&self, p: usize) -> usize {
        (p + 1) % self.size
    }

    pub fn prev(&self, p: usize) -> usize {
        (p + self.size - 1) % self.size
    }

    /// Counterclockwise steps from `from` to `to`.
    pub fn offset(&self, from: usize, to: usize) -> usize {
        (to + self.size - from) % self.size
    }

    /// True if `p` lies strictly inside the counterclockwise arc from `from` to `to`.
    pub fn strictly_between(&self, from: usize, p: usize, to: usize) -> bool {
        let d = self.offset(from, p);
        d > 0 && d < self.offset(from, to)
    }

    /// The perimeter edge `{i, i+1 mod size}`.
    pub fn perimeter_edge(&self, i: usize) -> Chord {
        Chord::new(i, self.next(i))
    }

    pub fn is_perimeter(&self, c: Chord) -> bool {
        c.b - c.a == 1 || (c.a == 0 && c.b == self.size - 1)
    }

    /// For a perimeter edge, the index `i` with `c = {i, i+1}`.
    pub fn perimeter_start(&self, c: Chord) -> Option<usize> {
        if c.b - c.a == 1 {
            Some(c.a)
        } else if c.a == 0 && c.b == self.size - 1 {
            Some(c.b)
        } else {
            None
        }
    }

    pub fn perimeter_parity(&self, c: Chord) -> Option<Parity> {
        self.perimeter_start(c).map(Parity::of)
    }

    pub fn chords_cross(&self, e1: Chord, e2: Chord) -> Result<bool> {
        self.check_chord(e1)?;
        self.check_chord(e2)?;
        Ok(cross(e1, e2))
    }

    pub fn classify_edge(&self, e: Chord) -> Result<EdgeClass> {
        self.check_chord(e)?;
        Ok(match self.perimeter_parity(e) {
            Some(Parity::Even) => EdgeClass::PerimeterEven,
            Some(Parity::Odd) => EdgeClass::PerimeterOdd,
            None => EdgeClass::Diagonal,
        })
    }

    pub fn is_noncrossing(&self, edges: &[Chord]) -> Result<bool> {
        for e in edges {
            self.check_chord(*e)?;
        }
        Ok(first_crossing(edges).is_none())
    }

    /// All chords spanned by the point set, in index order.
    pub fn all_chords(&self) -> impl Iterator<Item = Chord> + '_ {
        (1..self.size).flat_map(|b| (0..b).map(move |a| Chord { a, b }))
    }

    /// Image of a chord under the index shift `i -> i + k`.
    pub fn shift_chord(&self, c: Chord, k: usize) -> Chord {
        Chord::new((c.a + k) % self.size, (c.b + k) % self.size)
    }
}

pub(crate) fn first_crossing(edges: &[Chord]) -> Option<(Chord, Chord)> {
    for (i, e1) in edges.iter().enumerate() {
        for e2 in &edges[i + 1..] {
            if cross(*e1, *e2) {
                return Some((*e1, *e2));
            }
        }
    }
    None
}

/// Set of chords packed by [`Chord::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ChordSet(pub u128);

impl ChordSet {
    pub fn empty() -> Self {
        ChordSet(0)
    }

    pub fn insert(&mut self, c: Chord) {
        self.0 |= 1u128 << c.index();
    }

    pub fn remove(&mut self, c: Chord) {
        self.0 &= !(1u128 << c.index());
    }

    pub fn contains(&self, c: Chord) -> bool {
        self.0 >> c.index() & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &ChordSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Chord> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let idx = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(Chord::from_index(idx))
            }
        })
    }
}

impl FromIterator<Chord> for ChordSet {
    fn from_iter<I: IntoIterator<Item = Chord>>(iter: I) -> Self {
        let mut s = ChordSet::empty();
        for c in iter {
            s.insert(c);
        }
        s
    }
}
