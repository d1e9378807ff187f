//! Exact angular ordering of vectors in a rational plane.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::rational::Q;

/// Counterclockwise angle in `[0, 2pi)` measured from the positive first axis, represented
/// as a half-plane index and the vector itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleKey {
    half: u8,
    x: Q,
    y: Q,
}

pub fn angle_key(x: &Q, y: &Q) -> AngleKey {
    assert!(!(x.is_zero() && y.is_zero()), "zero vector has no angle");
    let half = if y.is_positive() || (y.is_zero() && x.is_positive()) { 0 } else { 1 };
    AngleKey { half, x: x.clone(), y: y.clone() }
}

pub fn cross(ax: &Q, ay: &Q, bx: &Q, by: &Q) -> Q {
    ax * by - ay * bx
}

pub fn cmp_angle(a: &AngleKey, b: &AngleKey) -> Ordering {
    a.half.cmp(&b.half).then_with(|| {
        let c = cross(&a.x, &a.y, &b.x, &b.y);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}
