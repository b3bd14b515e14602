//! Newton polygon of a Riccati operator at x = +∞.
//!
//! Each nonzero coefficient `g_i` marks the point `(deg g_i, i)`. The polygon
//! is the convex hull of these points together with `(−∞, 0)`; its finite
//! upper-right boundary is a chain of edges whose inclinations `μ` satisfy:
//! `d + i·μ` is maximal over the marked points exactly on the edge.

use std::fmt;

use crate::error::{Error, Result};
use crate::numfield::FieldElement;
use crate::puiseux::{format_exponent, Exponent};
use crate::riccati::RiccatiOperator;
use crate::upoly::Poly;

/// `(abscissa, ordinate)`.
pub type Point = (Exponent, usize);

/// A finite edge; identity is by value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub upper: Point,
    pub lower: Point,
    pub mu: Exponent,
}

impl Edge {
    fn between(upper: Point, lower: Point) -> Self {
        let mu = (lower.0 - upper.0) / Exponent::from_integer((upper.1 - lower.1) as i64);
        Edge { upper, lower, mu }
    }

    /// The common value of `d + i·μ` along the edge.
    pub fn support(&self) -> Exponent {
        self.upper.0 + Exponent::from_integer(self.upper.1 as i64) * self.mu
    }

    /// Abscissa of the point of the edge line at `ordinate`.
    pub fn abscissa_at(&self, ordinate: usize) -> Exponent {
        self.support() - Exponent::from_integer(ordinate as i64) * self.mu
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.1 >= self.lower.1
            && p.1 <= self.upper.1
            && p.0 + Exponent::from_integer(p.1 as i64) * self.mu == self.support()
    }

    /// The same edge moved by `(0, −k)`.
    pub fn translated_down(&self, k: usize) -> Option<Edge> {
        (self.lower.1 >= k).then(|| Edge {
            upper: (self.upper.0, self.upper.1 - k),
            lower: (self.lower.0, self.lower.1 - k),
            mu: self.mu,
        })
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) -- ({}, {}) mu={}",
            format_exponent(&self.upper.0),
            self.upper.1,
            format_exponent(&self.lower.0),
            self.lower.1,
            format_exponent(&self.mu)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// `(deg g_i, i)` for nonzero `g_i`, by increasing ordinate.
    pub marked_points: Vec<Point>,
    /// Hull vertices from the top ordinate down.
    pub vertices: Vec<Point>,
    /// Finite edges by decreasing inclination.
    pub edges: Vec<Edge>,
    /// The lowest marked ordinate is positive, so the hull closes with an
    /// edge of inclination −∞ towards `(−∞, 0)`.
    pub has_infinite_edge: bool,
}

impl NewtonPolygon {
    /// Ordinate of the lowest vertex.
    pub fn i_min(&self) -> usize {
        self.marked_points[0].1
    }

    pub fn is_vertex(&self, p: &Point) -> bool {
        self.vertices.contains(p)
    }

    pub fn points_on(&self, e: &Edge) -> Vec<Point> {
        self.marked_points
            .iter()
            .filter(|p| e.contains(p))
            .cloned()
            .collect()
    }

    pub fn edge_with_mu(&self, mu: &Exponent) -> Option<&Edge> {
        self.edges.iter().find(|e| &e.mu == mu)
    }
}

/// Hull of the marked points of `r` with `(−∞, 0)`, by a monotone chain over
/// the points sorted by decreasing ordinate.
pub fn compute_polygon(r: &RiccatiOperator) -> Result<NewtonPolygon> {
    let marked_points: Vec<Point> = r
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| g.deg_inf().map(|d| (d, i)))
        .collect();
    if marked_points.is_empty() {
        return Err(Error::Domain("Newton polygon of the zero operator".into()));
    }
    let mut chain: Vec<Point> = Vec::new();
    for p in marked_points.iter().rev() {
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            if Edge::between(a, b).mu <= Edge::between(b, *p).mu {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(*p);
    }
    let edges = chain.windows(2).map(|w| Edge::between(w[0], w[1])).collect();
    Ok(NewtonPolygon {
        has_infinite_edge: marked_points[0].1 > 0,
        marked_points,
        vertices: chain,
        edges,
    })
}

/// Characteristic polynomial of an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    /// `H(C) = Σ lc(g_i)·C^i` over marked points on the edge.
    pub h: Poly,
    pub edge: Edge,
}

pub fn characteristic(r: &RiccatiOperator, e: &Edge) -> Result<CharPoly> {
    let poly = compute_polygon(r)?;
    if !poly.edges.contains(e) {
        return Err(Error::EdgeMismatch);
    }
    let mut coeffs = vec![FieldElement::zero(); e.upper.1 + 1];
    for (_, i) in poly.points_on(e) {
        coeffs[i] = r.coeff(i).lc_inf()?;
    }
    Ok(CharPoly {
        h: Poly::new(coeffs, "C"),
        edge: e.clone(),
    })
}

/// The indicial constant `lc(g_{i₀})` of the vertex `p = (d, i₀)`.
pub fn indicial(r: &RiccatiOperator, p: &Point) -> Result<FieldElement> {
    let poly = compute_polygon(r)?;
    if !poly.is_vertex(p) {
        return Err(Error::NotAVertex(format_exponent(&p.0), p.1));
    }
    r.coeff(p.1).lc_inf()
}

/// Whether `lc(R(c·x^μ)) = H(c)` is guaranteed for every `c` with
/// `H(c) ≠ 0`.
///
/// The terms of `r_i(c·x^μ)` have degrees `jμ − (i − j)` for `1 ≤ j ≤ i`.
/// For `μ > −1` the top one is `c^i x^{iμ}`. For `μ = −1` they all coincide
/// and sum to `(c)_i x^{−i}`, which equals `c^i` only for `i ≤ 1`. For
/// `μ < −1` the top one is `c·(μ)_{i−1} x^{μ−i+1}`, so every point of
/// ordinate at least 2 must stay below the support after that shift.
pub fn leading_term_identity_applies(r: &RiccatiOperator, e: &Edge) -> bool {
    let minus_one = -Exponent::from_integer(1);
    if e.mu > minus_one {
        return true;
    }
    if e.upper.1 > 1 {
        return false;
    }
    e.mu == minus_one
        || r.coeffs().iter().enumerate().skip(2).all(|(i, g)| {
            g.deg_inf()
                .is_none_or(|d| d + e.mu - Exponent::from_integer(i as i64 - 1) < e.support())
        })
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.edges {
            writeln!(f, "{e}")?;
        }
        if self.has_infinite_edge {
            writeln!(f, "infinite edge from ordinate {}", self.i_min())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puiseux::{q, PuiseuxPoly, TruncatedSeries};
    use crate::riccati::LinearODE;
    use proptest::prelude::*;

    fn op(coeffs: &[&[i64]]) -> RiccatiOperator {
        RiccatiOperator::from_linear_ode(&LinearODE::from_int_coeffs(coeffs).unwrap())
    }

    fn airy() -> RiccatiOperator {
        op(&[&[0, -1], &[], &[1]])
    }

    fn int(n: i64) -> Exponent {
        Exponent::from_integer(n)
    }

    #[test]
    fn airy_polygon() {
        let p = compute_polygon(&airy()).unwrap();
        assert_eq!(p.marked_points, vec![(int(1), 0), (int(0), 2)]);
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.edges[0].mu, q(1, 2));
        assert!(!p.has_infinite_edge);
        let h = characteristic(&airy(), &p.edges[0]).unwrap();
        assert_eq!(h.h, Poly::from_ints(&[-1, 0, 1], "C"));
    }

    #[test]
    fn cosh_polygon() {
        let r = op(&[&[-1], &[], &[1]]);
        let p = compute_polygon(&r).unwrap();
        assert_eq!(p.marked_points, vec![(int(0), 0), (int(0), 2)]);
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.edges[0].mu, int(0));
        assert_eq!(
            characteristic(&r, &p.edges[0]).unwrap().h,
            Poly::from_ints(&[-1, 0, 1], "C")
        );
    }

    #[test]
    fn shifted_airy_polygon() {
        let r1 = airy().shift_substitute(&FieldElement::one(), q(1, 2)).unwrap();
        let p = compute_polygon(&r1).unwrap();
        assert_eq!(p.vertices, vec![(int(0), 2), (q(1, 2), 1), (q(-1, 2), 0)]);
        let mus: Vec<_> = p.edges.iter().map(|e| e.mu).collect();
        assert_eq!(mus, vec![q(1, 2), int(-1)]);
        let h = characteristic(&r1, &p.edges[1]).unwrap().h;
        assert_eq!(
            h,
            Poly::new(
                vec![FieldElement::from_frac(1, 2), FieldElement::from_int(2)],
                "C"
            )
        );
        let roots = h.roots_with_adjunction(&Default::default(), 3).unwrap();
        assert_eq!(roots.entries[0].root, FieldElement::from_frac(-1, 4));
    }

    #[test]
    fn stale_edge_rejected() {
        let p = compute_polygon(&airy()).unwrap();
        let cosh = op(&[&[-1], &[], &[1]]);
        assert!(matches!(
            characteristic(&cosh, &p.edges[0]),
            Err(Error::EdgeMismatch)
        ));
    }

    #[test]
    fn indicial_constants() {
        assert_eq!(indicial(&airy(), &(int(0), 2)).unwrap(), FieldElement::one());
        assert_eq!(
            indicial(&airy(), &(int(1), 0)).unwrap(),
            FieldElement::from_int(-1)
        );
        let cosh = op(&[&[-1], &[], &[1]]);
        assert_eq!(indicial(&cosh, &(int(0), 0)).unwrap(), FieldElement::from_int(-1));
        assert!(matches!(
            indicial(&airy(), &(int(0), 1)),
            Err(Error::NotAVertex(..))
        ));
    }

    #[test]
    fn infinite_edge_when_f0_vanishes() {
        let p = compute_polygon(&op(&[&[], &[-1], &[1]])).unwrap();
        assert!(p.has_infinite_edge);
        assert_eq!(p.i_min(), 1);
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.edges[0].mu, int(0));
    }

    #[test]
    fn collinear_middle_point_is_not_a_vertex() {
        // Points (2,2), (1,1), (0,0) on one edge of inclination −1.
        let p = compute_polygon(&op(&[&[-1], &[0, 1], &[0, 0, 1]])).unwrap();
        assert_eq!(p.vertices, vec![(int(2), 2), (int(0), 0)]);
        assert_eq!(p.points_on(&p.edges[0]).len(), 3);
    }

    /// With μ = −1 and an edge reaching ordinate 2, r_2(c/x) = c(c−1)x^{−2}
    /// differs from c²x^{−2}, so lc(R(c·x^μ)) ≠ H(c).
    #[test]
    fn leading_term_identity_fails_at_minus_one() {
        // x²y'' + xy' − y: H = C² + C − 1 but the solutions x, 1/x give c = ±1.
        let r = op(&[&[-1], &[0, 1], &[0, 0, 1]]);
        let p = compute_polygon(&r).unwrap();
        let e = &p.edges[0];
        assert!(!leading_term_identity_applies(&r, e));
        let h = characteristic(&r, e).unwrap().h;
        let c = FieldElement::from_int(2);
        let v = r
            .evaluate(&TruncatedSeries::exact(PuiseuxPoly::monomial(c.clone(), e.mu)))
            .unwrap();
        assert_eq!(v.body().deg_inf(), Some(int(0)));
        assert_eq!(h.eval(&c), FieldElement::from_int(5));
        assert_eq!(v.body().lc_inf().unwrap(), FieldElement::from_int(3));
    }

    #[test]
    fn leading_term_identity_below_minus_one_depends_on_upper_points() {
        // Edge (4,1)--(1,0) with μ = −3; x^5·r_2(c·x^{−3}) has a term −3c·x.
        let bad = op(&[&[0, 1], &[0, 0, 0, 0, 1], &[0, 0, 0, 0, 0, 1]]);
        let e = compute_polygon(&bad)
            .unwrap()
            .edge_with_mu(&int(-3))
            .unwrap()
            .clone();
        assert_eq!(e.mu, int(-3));
        assert!(!leading_term_identity_applies(&bad, &e));
        let c = FieldElement::from_int(2);
        let v = bad
            .evaluate(&TruncatedSeries::exact(PuiseuxPoly::monomial(c.clone(), e.mu)))
            .unwrap();
        assert_eq!(v.body().lc_inf().unwrap(), FieldElement::from_int(-3));
        assert_eq!(
            characteristic(&bad, &e).unwrap().h.eval(&c),
            FieldElement::from_int(3)
        );

        let good = op(&[&[0, 1], &[0, 0, 0, 0, 1], &[0, 0, 0, 0, 1]]);
        let e = compute_polygon(&good)
            .unwrap()
            .edge_with_mu(&int(-3))
            .unwrap()
            .clone();
        assert!(leading_term_identity_applies(&good, &e));
        let v = good
            .evaluate(&TruncatedSeries::exact(PuiseuxPoly::monomial(c.clone(), e.mu)))
            .unwrap();
        assert_eq!(v.body().lc_inf().unwrap(), FieldElement::from_int(3));
    }

    fn arb_operator() -> impl Strategy<Value = RiccatiOperator> {
        (1usize..=5)
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, 0..6), n + 1))
            .prop_map(|gs| {
                RiccatiOperator::new(gs.iter().map(|g| PuiseuxPoly::from_ints(g)).collect()).unwrap()
            })
            .prop_filter("nonzero", |r| !r.is_zero())
    }

    proptest! {
        #[test]
        fn edges_support_all_points(r in arb_operator()) {
            let p = compute_polygon(&r).unwrap();
            let mut prev: Option<Exponent> = None;
            for e in &p.edges {
                for pt in &p.marked_points {
                    let v = pt.0 + Exponent::from_integer(pt.1 as i64) * e.mu;
                    prop_assert!(v <= e.support());
                    prop_assert_eq!(v == e.support(), e.contains(pt));
                }
                prop_assert!(prev.is_none_or(|m| e.mu < m));
                prev = Some(e.mu);
            }
            for w in p.vertices.windows(2) {
                prop_assert!(w[0].1 > w[1].1);
            }
        }

        #[test]
        fn characteristic_is_nonzero(r in arb_operator()) {
            let p = compute_polygon(&r).unwrap();
            for e in &p.edges {
                let h = characteristic(&r, e).unwrap().h;
                prop_assert!(!h.is_zero());
                prop_assert_eq!(h.degree(), Some(e.upper.1));
            }
        }
    }
}
