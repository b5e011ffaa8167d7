//! Points and lines of the affine plane over a finite field.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::gf::{Felt, FieldTable};

/// Direction of a line. Finite slopes sort by element index, then `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slope {
    Finite(Felt),
    Infinity,
}

impl Slope {
    /// Slopes in the fixed order `0, 1, …, q-1, ∞`.
    pub fn all(field: &FieldTable) -> impl Iterator<Item = Slope> + '_ {
        field
            .elements()
            .map(Slope::Finite)
            .chain(std::iter::once(Slope::Infinity))
    }

    /// Position in a length-(q+1) intercept vector.
    pub fn position(self, q: usize) -> usize {
        match self {
            Slope::Finite(m) => m.idx(),
            Slope::Infinity => q,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(m) => write!(f, "{m}"),
            Slope::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Slope::Finite(m) => m.serialize(serializer),
            Slope::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// `y = m·x + b` for a finite slope, `x = a` for `Slope::Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Line {
    pub slope: Slope,
    pub intercept: Felt,
}

impl Line {
    pub fn new(slope: Slope, intercept: Felt) -> Self {
        Self { slope, intercept }
    }

    pub fn finite(m: Felt, b: Felt) -> Self {
        Self::new(Slope::Finite(m), b)
    }

    pub fn vertical(a: Felt) -> Self {
        Self::new(Slope::Infinity, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Felt,
    pub y: Felt,
}

impl Point {
    pub fn new(x: Felt, y: Felt) -> Self {
        Self { x, y }
    }

    /// Row-major cell index `x·q + y`.
    #[inline]
    pub fn cell(self, q: usize) -> usize {
        self.x.idx() * q + self.y.idx()
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intersection {
    Point(Point),
    Parallel,
    Coincident,
}

/// The q points of `line`, ordered by x for finite slopes and by y for
/// vertical lines.
pub fn line_points(field: &FieldTable, line: &Line) -> Vec<Point> {
    match line.slope {
        Slope::Finite(m) => field
            .elements()
            .map(|x| Point::new(x, field.add(field.mul(m, x), line.intercept)))
            .collect(),
        Slope::Infinity => field
            .elements()
            .map(|y| Point::new(line.intercept, y))
            .collect(),
    }
}

pub fn contains(field: &FieldTable, line: &Line, point: &Point) -> bool {
    match line.slope {
        Slope::Finite(m) => field.add(field.mul(m, point.x), line.intercept) == point.y,
        Slope::Infinity => point.x == line.intercept,
    }
}

pub fn intersect(field: &FieldTable, l1: &Line, l2: &Line) -> Intersection {
    if l1.slope == l2.slope {
        return if l1.intercept == l2.intercept {
            Intersection::Coincident
        } else {
            Intersection::Parallel
        };
    }
    let point = match (l1.slope, l2.slope) {
        (Slope::Finite(m1), Slope::Finite(m2)) => {
            let x = field
                .div(field.sub(l2.intercept, l1.intercept), field.sub(m1, m2))
                .expect("distinct slopes have a nonzero difference");
            Point::new(x, field.add(field.mul(m1, x), l1.intercept))
        }
        (Slope::Finite(m), Slope::Infinity) => {
            let a = l2.intercept;
            Point::new(a, field.add(field.mul(m, a), l1.intercept))
        }
        (Slope::Infinity, Slope::Finite(m)) => {
            let a = l1.intercept;
            Point::new(a, field.add(field.mul(m, a), l2.intercept))
        }
        (Slope::Infinity, Slope::Infinity) => unreachable!(),
    };
    Intersection::Point(point)
}
