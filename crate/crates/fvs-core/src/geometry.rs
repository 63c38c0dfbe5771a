//! Exact rational plane geometry for straight-line graph drawings: point
//! arithmetic, orientation tests, collinearity, and proper segment
//! crossings. Everything is computed over arbitrary-precision rationals so
//! crossing detection and placement are bit-exact.

use std::cmp::Ordering;

use num::{BigInt, BigRational, Zero};

pub type Coord = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point {
            x: BigRational::from_integer(BigInt::from(x)),
            y: BigRational::from_integer(BigInt::from(y)),
        }
    }

    /// The point a + t·(b − a).
    pub fn at_parameter(a: &Point, b: &Point, t: &Coord) -> Point {
        Point {
            x: &a.x + t * (&b.x - &a.x),
            y: &a.y + t * (&b.y - &a.y),
        }
    }
}

pub fn rational(numerator: i64, denominator: i64) -> Coord {
    BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
}

fn cross(ux: &Coord, uy: &Coord, vx: &Coord, vy: &Coord) -> Coord {
    ux * vy - uy * vx
}

/// Sign of the signed area of the triangle o, a, b: Greater for a left
/// turn, Less for a right turn, Equal when collinear.
pub fn orientation(o: &Point, a: &Point, b: &Point) -> Ordering {
    cross(&(&a.x - &o.x), &(&a.y - &o.y), &(&b.x - &o.x), &(&b.y - &o.y))
        .cmp(&Coord::zero())
}

pub fn collinear(o: &Point, a: &Point, b: &Point) -> bool {
    orientation(o, a, b) == Ordering::Equal
}

/// Whether p lies on the open segment (a, b): collinear with it and
/// strictly between the endpoints.
pub fn strictly_between(p: &Point, a: &Point, b: &Point) -> bool {
    if !collinear(a, b, p) {
        return false;
    }
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    let dot = (&p.x - &a.x) * &dx + (&p.y - &a.y) * &dy;
    let len2 = &dx * &dx + &dy * &dy;
    dot > Coord::zero() && dot < len2
}

/// Whether the collinear segments [a,b] and [c,d] share more than a single
/// point. False whenever the four points are not collinear.
pub fn collinear_overlap(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    if !collinear(a, b, c) || !collinear(a, b, d) {
        return false;
    }
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    let project = |p: &Point| (&p.x - &a.x) * &dx + (&p.y - &a.y) * &dy;
    let len2 = &dx * &dx + &dy * &dy;
    let (tc, td) = (project(c), project(d));
    let lo = tc.clone().min(td.clone());
    let hi = tc.max(td);
    lo.max(Coord::zero()) < hi.min(len2)
}

/// A transversal intersection of two segments, with the intersection point
/// and its parameter along each segment (0 at the first endpoint, 1 at the
/// second).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentCrossing {
    pub point: Point,
    pub t_first: Coord,
    pub t_second: Coord,
}

/// The proper crossing of segments [a,b] and [c,d], if any: the segments
/// intersect in exactly one point that is interior to both. Parallel,
/// collinear, and endpoint-touching configurations return None.
pub fn proper_crossing(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<SegmentCrossing> {
    let d1x = &b.x - &a.x;
    let d1y = &b.y - &a.y;
    let d2x = &d.x - &c.x;
    let d2y = &d.y - &c.y;
    let den = cross(&d1x, &d1y, &d2x, &d2y);
    if den.is_zero() {
        return None;
    }
    let acx = &c.x - &a.x;
    let acy = &c.y - &a.y;
    let t = cross(&acx, &acy, &d2x, &d2y) / &den;
    let s = cross(&acx, &acy, &d1x, &d1y) / &den;
    let zero = Coord::zero();
    let one = Coord::from_integer(BigInt::from(1));
    if t > zero && t < one && s > zero && s < one {
        Some(SegmentCrossing {
            point: Point::at_parameter(a, b, &t),
            t_first: t,
            t_second: s,
        })
    } else {
        None
    }
}
