use std::cmp::Ordering;

use super::kernel::{Arrangement, CurveId};
use super::scalar::{Frac, Scalar, XCoord};

pub use ote_decoder::decoder::alternates;

/// Open trapezoid between two walls; a missing curve means unbounded.
#[derive(Clone, Debug)]
pub struct Trap<S> {
    pub xl: XCoord<S>,
    pub xr: XCoord<S>,
    pub bottom: Option<CurveId>,
    pub top: Option<CurveId>,
}

impl<S: Scalar> Trap<S> {
    pub fn plane() -> Self {
        Trap { xl: XCoord::NegInf, xr: XCoord::PosInf, bottom: None, top: None }
    }
}

/// A cell of a vertical decomposition.
#[derive(Clone, Debug)]
pub enum CellGeom<S> {
    /// The point of curve `through` at `x`.
    Vertex { x: Frac<S>, through: CurveId },
    /// Open vertical segment at `x` between two curves.
    Wall { x: Frac<S>, lower: Option<CurveId>, upper: Option<CurveId> },
    /// Open piece of `curve` over `(xl, xr)`.
    Edge { curve: CurveId, xl: XCoord<S>, xr: XCoord<S> },
    Trapezoid(Trap<S>),
}

impl<S: Scalar> PartialEq for Trap<S> {
    fn eq(&self, o: &Self) -> bool {
        self.xl == o.xl && self.xr == o.xr && self.bottom == o.bottom && self.top == o.top
    }
}

impl<S: Scalar> Eq for Trap<S> {}

impl<S: Scalar> PartialEq for CellGeom<S> {
    fn eq(&self, o: &Self) -> bool {
        use CellGeom::*;
        match (self, o) {
            (Vertex { x, through }, Vertex { x: x2, through: t2 }) => x == x2 && through == t2,
            (Wall { x, lower, upper }, Wall { x: x2, lower: l2, upper: u2 }) => x == x2 && lower == l2 && upper == u2,
            (Edge { curve, xl, xr }, Edge { curve: c2, xl: l2, xr: r2 }) => curve == c2 && xl == l2 && xr == r2,
            (Trapezoid(a), Trapezoid(b)) => a == b,
            _ => false,
        }
    }
}

impl<S: Scalar> Eq for CellGeom<S> {}

impl<S: Scalar> CellGeom<S> {
    pub fn dim(&self) -> u8 {
        match self {
            CellGeom::Vertex { .. } => 0,
            CellGeom::Wall { .. } | CellGeom::Edge { .. } => 1,
            CellGeom::Trapezoid(_) => 2,
        }
    }
}

/// A boundary point of a trapezoid, keyed for the counterclockwise walk
/// starting at the bottom-left corner.
#[derive(Clone, Debug)]
pub enum HitKey<S> {
    /// On the bottom curve at this x (corners included).
    Bottom(Frac<S>),
    /// On the right wall where the given curve meets it.
    Right(CurveId),
    /// On the top curve at this x.
    Top(Frac<S>),
    /// On the left wall where the given curve meets it.
    Left(CurveId),
}

impl<S> HitKey<S> {
    fn side(&self) -> u8 {
        match self {
            HitKey::Bottom(_) => 0,
            HitKey::Right(_) => 1,
            HitKey::Top(_) => 2,
            HitKey::Left(_) => 3,
        }
    }
}

/// Position of a curve relative to a cell.
#[derive(Clone, Debug)]
pub enum Relation<S> {
    Above,
    Below,
    Contains,
    /// Crosses a trapezoid, entering and leaving at these boundary points.
    CrossTrap(HitKey<S>, HitKey<S>),
    /// Crosses an edge at `x`; `above_left` tells which side it comes from.
    CrossEdge { x: Frac<S>, above_left: bool },
    CrossWall,
}

impl<S> Relation<S> {
    pub fn code(&self) -> ote_decoder::CellRelation {
        use ote_decoder::CellRelation as R;
        match self {
            Relation::Above => R::Above,
            Relation::Below => R::Below,
            Relation::Contains => R::Contains,
            _ => R::Crosses,
        }
    }

    pub fn crosses(&self) -> bool {
        matches!(self, Relation::CrossTrap(..) | Relation::CrossEdge { .. } | Relation::CrossWall)
    }
}

/// Side of `c` against `d` over an open x-interval.
#[derive(Clone, Debug)]
enum Span<S> {
    Above,
    Below,
    Cross(Frac<S>),
}

impl<S: Scalar> Arrangement<S> {
    fn span(&self, c: CurveId, d: Option<CurveId>, xl: &XCoord<S>, xr: &XCoord<S>, d_is_bottom: bool) -> Span<S> {
        let Some(d) = d else {
            return if d_is_bottom { Span::Above } else { Span::Below };
        };
        let l = self.cmp_right(c, d, xl);
        let r = self.cmp_left(c, d, xr);
        match (l, r) {
            (Ordering::Greater, Ordering::Greater) => Span::Above,
            (Ordering::Less, Ordering::Less) => Span::Below,
            _ => Span::Cross(self.crossing(c, d).expect("sides differ")),
        }
    }

    /// Relation of curve `c` to the open trapezoid `t`.
    pub fn classify_trap(&self, t: &Trap<S>, c: CurveId) -> Relation<S> {
        if Some(c) == t.bottom {
            return Relation::Below;
        }
        if Some(c) == t.top {
            return Relation::Above;
        }
        let sb = self.span(c, t.bottom, &t.xl, &t.xr, true);
        if matches!(sb, Span::Below) {
            return Relation::Below;
        }
        let st = self.span(c, t.top, &t.xl, &t.xr, false);
        if matches!(st, Span::Above) {
            return Relation::Above;
        }
        let cross_x = |s: &Span<S>| match s {
            Span::Cross(x) => x.clone(),
            _ => unreachable!("entry through a curve it does not cross"),
        };
        let at = |x: &XCoord<S>| {
            (self.cmp_opt(c, t.bottom, x, true), self.cmp_opt(c, t.top, x, false))
        };
        let entry = match at(&t.xl) {
            (Ordering::Equal, _) => HitKey::Bottom(t.xl.finite().unwrap().clone()),
            (_, Ordering::Equal) => HitKey::Top(t.xl.finite().unwrap().clone()),
            (Ordering::Less, _) => HitKey::Bottom(cross_x(&sb)),
            (_, Ordering::Greater) => HitKey::Top(cross_x(&st)),
            _ => HitKey::Left(c),
        };
        let exit = match at(&t.xr) {
            (Ordering::Equal, _) => HitKey::Bottom(t.xr.finite().unwrap().clone()),
            (_, Ordering::Equal) => HitKey::Right(c),
            (Ordering::Less, _) => HitKey::Bottom(cross_x(&sb)),
            (_, Ordering::Greater) => HitKey::Top(cross_x(&st)),
            _ => HitKey::Right(c),
        };
        Relation::CrossTrap(entry, exit)
    }

    /// Relation of curve `c` to any cell.
    pub fn classify(&self, cell: &CellGeom<S>, c: CurveId) -> Relation<S> {
        match cell {
            CellGeom::Vertex { x, through } => match self.cmp_at(c, *through, &XCoord::At(x.clone())) {
                Ordering::Equal => Relation::Contains,
                Ordering::Greater => Relation::Above,
                Ordering::Less => Relation::Below,
            },
            CellGeom::Wall { x, lower, upper } => {
                let x = XCoord::At(x.clone());
                if self.cmp_opt(c, *lower, &x, true) != Ordering::Greater {
                    Relation::Below
                } else if self.cmp_opt(c, *upper, &x, false) != Ordering::Less {
                    Relation::Above
                } else {
                    Relation::CrossWall
                }
            }
            CellGeom::Edge { curve, xl, xr } => {
                if c == *curve {
                    return Relation::Contains;
                }
                match self.span(c, Some(*curve), xl, xr, true) {
                    Span::Above => Relation::Above,
                    Span::Below => Relation::Below,
                    Span::Cross(x) => Relation::CrossEdge {
                        x,
                        above_left: self.cmp_right(c, *curve, xl) == Ordering::Greater,
                    },
                }
            }
            CellGeom::Trapezoid(t) => self.classify_trap(t, c),
        }
    }

    /// Order of two boundary points along the walk of `t`.
    pub fn cmp_hits(&self, t: &Trap<S>, p: &HitKey<S>, q: &HitKey<S>) -> Ordering {
        match (p, q) {
            (HitKey::Bottom(a), HitKey::Bottom(b)) => a.cmp(b),
            (HitKey::Top(a), HitKey::Top(b)) => b.cmp(a),
            (HitKey::Right(a), HitKey::Right(b)) => self.cmp_at(*a, *b, &t.xr),
            (HitKey::Left(a), HitKey::Left(b)) => self.cmp_at(*b, *a, &t.xl),
            _ => p.side().cmp(&q.side()),
        }
    }

    /// Is the crossing point of `a` and `b` (at `x`) inside `cell`?
    pub fn cell_contains(&self, cell: &CellGeom<S>, x: &Frac<S>, a: CurveId) -> bool {
        let xc = XCoord::At(x.clone());
        match cell {
            CellGeom::Vertex { x: x0, through } => x0 == x && self.cmp_at(a, *through, &xc) == Ordering::Equal,
            CellGeom::Wall { x: x0, lower, upper } => {
                x0 == x
                    && self.cmp_opt(a, *lower, &xc, true) == Ordering::Greater
                    && self.cmp_opt(a, *upper, &xc, false) == Ordering::Less
            }
            CellGeom::Edge { curve, xl, xr } => {
                *xl < xc && xc < *xr && self.cmp_at(a, *curve, &xc) == Ordering::Equal
            }
            CellGeom::Trapezoid(t) => {
                t.xl < xc
                    && xc < t.xr
                    && self.cmp_opt(a, t.bottom, &xc, true) == Ordering::Greater
                    && self.cmp_opt(a, t.top, &xc, false) == Ordering::Less
            }
        }
    }
}
