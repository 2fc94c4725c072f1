//! Brute-force orientations, computed without the encoder's geometry.

use ote_core::exact::{ExactPoint, ExactRational};
use ote_core::wiring::wiring_chirotope;
use ote_decoder::OrientationSign;

use crate::input::Input;

/// Sign of `(q - p) x (r - p)`.
pub fn orient(p: &ExactPoint, q: &ExactPoint, r: &ExactPoint) -> OrientationSign {
    let ux: ExactRational = &q.x - &p.x;
    let uy: ExactRational = &q.y - &p.y;
    let vx: ExactRational = &r.x - &p.x;
    let vy: ExactRational = &r.y - &p.y;
    (&(&ux * &vy) - &(&uy * &vx)).sign()
}

/// Ground truth for labels `(a, b, c)`, 0-based.
pub fn expected(input: &Input, a: usize, b: usize, c: usize) -> OrientationSign {
    match input {
        Input::Points(p) => orient(&p[a], &p[b], &p[c]),
        Input::Wiring(w) => wiring_chirotope(w, a, b, c).expect("labels in range"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_triangle() {
        let p = [(0, 0), (1, 0), (0, 1)].map(|(x, y)| ExactPoint::from_ints(x, y));
        assert_eq!(orient(&p[0], &p[1], &p[2]), OrientationSign::Positive);
        assert_eq!(orient(&p[1], &p[0], &p[2]), OrientationSign::Negative);
        assert_eq!(orient(&p[0], &p[0], &p[2]), OrientationSign::Zero);
    }
}
