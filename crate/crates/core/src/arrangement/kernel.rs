use std::cmp::Ordering;

use super::scalar::{Frac, Scalar, XCoord};
use ote_decoder::OrientationSign;

pub type CurveId = u32;

/// Piecewise-linear x-monotone curve with integer coefficients.
/// Piece `i` is `y = a*x + b` on `[breaks[i-1], breaks[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlCurve<S> {
    pub breaks: Vec<S>,
    pub pieces: Vec<(S, S)>,
}

impl<S: Scalar> PlCurve<S> {
    pub fn line(a: S, b: S) -> Self {
        PlCurve { breaks: Vec::new(), pieces: vec![(a, b)] }
    }

    /// Piece containing `x`; at a break either neighbour is correct.
    fn piece_at(&self, x: &Frac<S>) -> &(S, S) {
        if self.breaks.is_empty() {
            return &self.pieces[0];
        }
        let k = self.breaks.partition_point(|b| x.cmp_int(b) == Ordering::Greater);
        &self.pieces[k]
    }

    fn piece_right(&self, x: &XCoord<S>) -> &(S, S) {
        match x {
            XCoord::NegInf => &self.pieces[0],
            XCoord::PosInf => self.pieces.last().unwrap(),
            XCoord::At(f) => {
                let k = self.breaks.partition_point(|b| f.cmp_int(b) != Ordering::Less);
                &self.pieces[k]
            }
        }
    }

    fn piece_left(&self, x: &XCoord<S>) -> &(S, S) {
        match x {
            XCoord::NegInf => &self.pieces[0],
            XCoord::PosInf => self.pieces.last().unwrap(),
            XCoord::At(f) => {
                let k = self.breaks.partition_point(|b| f.cmp_int(b) == Ordering::Greater);
                &self.pieces[k]
            }
        }
    }

    /// `den * y(x)`.
    pub fn scaled_value(&self, x: &Frac<S>) -> S {
        let (a, b) = self.piece_at(x);
        a.clone() * x.num.clone() + b.clone() * x.den.clone()
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement<S> {
    pub curves: Vec<PlCurve<S>>,
}

fn cmp_at_infinity<S: Scalar>(p: &(S, S), q: &(S, S), neg: bool) -> Ordering {
    let by_slope = if neg { q.0.cmp(&p.0) } else { p.0.cmp(&q.0) };
    by_slope.then_with(|| p.1.cmp(&q.1))
}

impl<S: Scalar> Arrangement<S> {
    pub fn new(curves: Vec<PlCurve<S>>) -> Self {
        Arrangement { curves }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn curve(&self, id: CurveId) -> &PlCurve<S> {
        &self.curves[id as usize]
    }

    pub fn is_lines(&self) -> bool {
        self.curves.iter().all(|c| c.breaks.is_empty())
    }

    /// Vertical order of `c` against `d` at `x`; at an infinite `x` the
    /// order is the limit order.
    pub fn cmp_at(&self, c: CurveId, d: CurveId, x: &XCoord<S>) -> Ordering {
        if c == d {
            return Ordering::Equal;
        }
        let (pc, pd) = (self.curve(c), self.curve(d));
        match x {
            XCoord::NegInf => cmp_at_infinity(&pc.pieces[0], &pd.pieces[0], true),
            XCoord::PosInf => cmp_at_infinity(pc.pieces.last().unwrap(), pd.pieces.last().unwrap(), false),
            XCoord::At(f) => pc.scaled_value(f).cmp(&pd.scaled_value(f)),
        }
    }

    /// Vertical order at a finite `x`, `None` standing for a bounding curve
    /// at `-inf` when `lower` and `+inf` otherwise.
    pub fn cmp_opt(&self, c: CurveId, d: Option<CurveId>, x: &XCoord<S>, lower: bool) -> Ordering {
        match d {
            Some(d) => self.cmp_at(c, d, x),
            None if lower => Ordering::Greater,
            None => Ordering::Less,
        }
    }

    /// Order just to the right of `x`.
    pub fn cmp_right(&self, c: CurveId, d: CurveId, x: &XCoord<S>) -> Ordering {
        if c == d {
            return Ordering::Equal;
        }
        match x {
            XCoord::At(_) => self.cmp_at(c, d, x).then_with(|| {
                let (pc, pd) = (self.curve(c).piece_right(x), self.curve(d).piece_right(x));
                pc.0.cmp(&pd.0)
            }),
            _ => self.cmp_at(c, d, x),
        }
    }

    /// Order just to the left of `x`.
    pub fn cmp_left(&self, c: CurveId, d: CurveId, x: &XCoord<S>) -> Ordering {
        if c == d {
            return Ordering::Equal;
        }
        match x {
            XCoord::At(_) => self.cmp_at(c, d, x).then_with(|| {
                let (pc, pd) = (self.curve(c).piece_left(x), self.curve(d).piece_left(x));
                pd.0.cmp(&pc.0)
            }),
            _ => self.cmp_at(c, d, x),
        }
    }

    /// The x-coordinate where `c` and `d` cross, if they do.
    pub fn crossing(&self, c: CurveId, d: CurveId) -> Option<Frac<S>> {
        if c == d {
            return None;
        }
        let lo = self.cmp_at(c, d, &XCoord::NegInf);
        let hi = self.cmp_at(c, d, &XCoord::PosInf);
        if lo == hi {
            return None;
        }
        let (pc, pd) = (self.curve(c), self.curve(d));
        if pc.breaks.is_empty() && pd.breaks.is_empty() {
            return solve(&pc.pieces[0], &pd.pieces[0]);
        }
        let sign_at = |b: &S| {
            let f = Frac::int(b.clone());
            pc.scaled_value(&f).cmp(&pd.scaled_value(&f))
        };
        let locate = |curve: &PlCurve<S>| -> Result<Frac<S>, usize> {
            let k = curve.breaks.partition_point(|b| sign_at(b) == lo);
            if k < curve.breaks.len() && sign_at(&curve.breaks[k]) == Ordering::Equal {
                Ok(Frac::int(curve.breaks[k].clone()))
            } else {
                Err(k)
            }
        };
        match (locate(pc), locate(pd)) {
            (Ok(x), _) | (_, Ok(x)) => Some(x),
            (Err(i), Err(j)) => solve(&pc.pieces[i], &pd.pieces[j]),
        }
    }

    /// `sign(p.y - c(p.x))` for the crossing point `p` of `a` and `b`.
    pub fn side_of_crossing(&self, a: CurveId, b: CurveId, c: CurveId) -> Option<OrientationSign> {
        let x = self.crossing(a, b)?;
        Some(OrientationSign::from_ordering(self.cmp_at(a, c, &XCoord::At(x))))
    }

    /// Top-to-bottom order at `x = -inf`: `rank[c]` is the position of `c`.
    pub fn ranks_at_neg_inf(&self) -> Vec<u32> {
        let mut ids: Vec<CurveId> = (0..self.len() as CurveId).collect();
        ids.sort_by(|&a, &b| self.cmp_at(b, a, &XCoord::NegInf));
        let mut rank = vec![0u32; self.len()];
        for (r, &c) in ids.iter().enumerate() {
            rank[c as usize] = r as u32;
        }
        rank
    }

    /// Checks that every pair of curves crosses exactly once, properly.
    pub fn validate_pair(&self, c: CurveId, d: CurveId) -> Result<(), String> {
        let (pc, pd) = (self.curve(c), self.curve(d));
        let mut xs: Vec<&S> = pc.breaks.iter().chain(&pd.breaks).collect();
        xs.sort();
        xs.dedup();
        let mut signs = vec![self.cmp_at(c, d, &XCoord::NegInf)];
        signs.extend(xs.iter().map(|b| {
            let f = Frac::int((*b).clone());
            pc.scaled_value(&f).cmp(&pd.scaled_value(&f))
        }));
        signs.push(self.cmp_at(c, d, &XCoord::PosInf));
        let first = signs[0];
        let last = *signs.last().unwrap();
        if first == Ordering::Equal || last == Ordering::Equal {
            return Err(format!("curves {c} and {d} overlap on an unbounded ray"));
        }
        if first == last {
            return Err(format!("curves {c} and {d} do not cross exactly once"));
        }
        let mut phase = 0;
        for s in signs {
            match (phase, s) {
                (0, s) if s == first => {}
                (0, Ordering::Equal) => phase = 1,
                (0 | 1, s) if s == last => phase = 2,
                (2, s) if s == last => {}
                _ => return Err(format!("curves {c} and {d} do not cross exactly once")),
            }
        }
        Ok(())
    }
}

fn solve<S: Scalar>(p: &(S, S), q: &(S, S)) -> Option<Frac<S>> {
    let den = p.0.clone() - q.0.clone();
    if den.is_zero() {
        return None;
    }
    Some(Frac::new(q.1.clone() - p.1.clone(), den))
}
