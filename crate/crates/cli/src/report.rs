//! JSON and text renderings of solver and polygon results.
//!
//! Rationals (coefficients and exponents) are JSON integers when integral
//! and small enough, and `"p/q"` strings otherwise. An element of an
//! extension tower is `{"level": k, "coords": [a_0, a_1, …]}`, meaning
//! `Σ a_j θ_k^j` with each `a_j` one level down.

use num_traits::{One, ToPrimitive};
use puiseux_riccati::numfield::format_rational;
use puiseux_riccati::polygon::{characteristic, compute_polygon, leading_term_identity_applies, Point};
use puiseux_riccati::puiseux::format_exponent;
use puiseux_riccati::solver::{BranchStatus, SolutionBranch, SolutionTree};
use puiseux_riccati::{
    Exponent, ExtensionTower, FieldElement, LinearODE, Poly, PuiseuxPoly, Rational, RiccatiOperator,
    TruncatedSeries,
};
use serde_json::{json, Value};

use crate::document::{parse_exponent, parse_rational};

pub fn rational_json(q: &Rational) -> Value {
    if q.denom().is_one() {
        if let Some(i) = q.numer().to_i64() {
            return json!(i);
        }
    }
    json!(format_rational(q))
}

pub fn exponent_json(e: &Exponent) -> Value {
    if e.is_integer() {
        json!(e.to_integer())
    } else {
        json!(format_exponent(e))
    }
}

pub fn element_json(c: &FieldElement) -> Value {
    if let Some(q) = c.as_rational() {
        return rational_json(q);
    }
    let level = c.level();
    json!({
        "level": level,
        "coords": c.coordinates(level).iter().map(element_json).collect::<Vec<_>>(),
    })
}

pub fn element_from_json(v: &Value, tower: &ExtensionTower) -> Result<FieldElement, String> {
    if let Some(obj) = v.as_object() {
        let level = obj
            .get("level")
            .and_then(Value::as_u64)
            .ok_or("element needs a level")? as usize;
        if level == 0 || level > tower.depth() {
            return Err(format!("level {level} outside tower of depth {}", tower.depth()));
        }
        let below = tower.truncate(level - 1);
        let coords = obj
            .get("coords")
            .and_then(Value::as_array)
            .ok_or("element needs coords")?
            .iter()
            .map(|c| element_from_json(c, &below))
            .collect::<Result<Vec<_>, _>>()?;
        let e = FieldElement::from_coordinates(&tower.truncate(level), level, &coords)
            .map_err(|e| e.to_string())?;
        return e.embed(tower).map_err(|e| e.to_string());
    }
    let q = parse_rational(v)?;
    FieldElement::from_rational(q)
        .embed(tower)
        .map_err(|e| e.to_string())
}

pub fn tower_json(t: &ExtensionTower) -> Value {
    let levels: Vec<Value> = (1..=t.depth())
        .map(|l| {
            let name = t.generator_name(l).to_string();
            let mp = t.minpoly(l, &name);
            json!({
                "name": name,
                "minpoly": mp.coeffs().iter().map(element_json).collect::<Vec<_>>(),
                "text": mp.to_string(),
            })
        })
        .collect();
    json!(levels)
}

pub fn tower_from_json(v: &Value) -> Result<ExtensionTower, String> {
    let mut tower = ExtensionTower::rational();
    for level in v.as_array().ok_or("tower must be a list")? {
        let coeffs = level
            .get("minpoly")
            .and_then(Value::as_array)
            .ok_or("level needs a minpoly")?
            .iter()
            .map(|c| element_from_json(c, &tower))
            .collect::<Result<Vec<_>, _>>()?;
        tower = tower.adjoin(&Poly::new(coeffs, "t")).map_err(|e| e.to_string())?;
    }
    Ok(tower)
}

fn opt_exponent_json(e: Option<Exponent>) -> Value {
    e.as_ref().map_or(Value::Null, exponent_json)
}

fn terms_json(p: &PuiseuxPoly) -> Value {
    json!(p
        .terms()
        .map(|(e, c)| json!({"exponent": exponent_json(e), "coefficient": element_json(c)}))
        .collect::<Vec<_>>())
}

fn status_name(s: BranchStatus) -> &'static str {
    match s {
        BranchStatus::Exact => "exact",
        BranchStatus::Truncated => "truncated",
    }
}

pub fn branch_json(b: &SolutionBranch) -> Value {
    json!({
        "node": b.node,
        "status": status_name(b.status),
        "floor": opt_exponent_json(b.series.floor()),
        "terms": terms_json(b.series.body()),
        "series": b.series.to_string(),
        "tower": tower_json(&b.tower),
        "conjugacy_degree": b.conjugacy_degree,
        "multiplicity": b.multiplicity,
        "residual_degree": opt_exponent_json(b.residual_degree),
        "certified": b.certified,
    })
}

/// Rebuilds a branch's series from its JSON form.
pub fn series_from_json(v: &Value) -> Result<(TruncatedSeries, ExtensionTower), String> {
    let tower = tower_from_json(v.get("tower").ok_or("branch needs a tower")?)?;
    let mut terms = Vec::new();
    for t in v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or("branch needs terms")?
    {
        let e = exponent_from_json(t.get("exponent").ok_or("term needs an exponent")?)?;
        let c = element_from_json(t.get("coefficient").ok_or("term needs a coefficient")?, &tower)?;
        terms.push((c, e));
    }
    let body = PuiseuxPoly::from_terms(terms);
    let series = match v.get("floor") {
        None | Some(Value::Null) => TruncatedSeries::exact(body),
        Some(f) => TruncatedSeries::truncated(body, exponent_from_json(f)?),
    };
    Ok((series, tower))
}

pub fn exponent_from_json(v: &Value) -> Result<Exponent, String> {
    match v {
        Value::String(s) => parse_exponent(s),
        other => other
            .as_i64()
            .map(Exponent::from_integer)
            .ok_or_else(|| format!("bad exponent {other}")),
    }
}

pub struct SolveSettings {
    pub floor: Exponent,
    pub max_terms: usize,
    pub ext_cap: usize,
}

pub fn solve_json(ode: &LinearODE, tree: &SolutionTree, count: usize, s: &SolveSettings) -> Value {
    json!({
        "equation": ode.to_string(),
        "order": ode.order(),
        "floor": exponent_json(&s.floor),
        "max_terms": s.max_terms,
        "ext_cap": s.ext_cap,
        "count": count,
        "branches": tree.branches.iter().map(branch_json).collect::<Vec<_>>(),
        "dead": tree.dead.iter().map(|d| json!({
            "node": d.node,
            "multiplicity": d.multiplicity,
            "conjugacy_degree": d.conjugacy_degree,
        })).collect::<Vec<_>>(),
    })
}

pub fn solve_text(ode: &LinearODE, tree: &SolutionTree, count: usize, s: &SolveSettings) -> String {
    let mut out = format!(
        "{}\norder {}, floor {}, max terms {}, extension cap {}, {} solutions accounted for\n",
        ode,
        ode.order(),
        format_exponent(&s.floor),
        s.max_terms,
        s.ext_cap,
        count
    );
    for (i, b) in tree.branches.iter().enumerate() {
        let status = match b.series.floor() {
            None => "exact".to_string(),
            Some(f) => format!("truncated below x^({})", format_exponent(&f)),
        };
        out.push_str(&format!("branch {}: {} [{}]\n", i + 1, b.series, status));
        out.push_str(&format!(
            "  field {}, conjugates {}, multiplicity {}, residual degree {}{}\n",
            b.tower,
            b.conjugacy_degree,
            b.multiplicity,
            b.residual_degree
                .as_ref()
                .map_or("-inf".to_string(), format_exponent),
            if b.certified {
                ""
            } else {
                ", uncertified (edge with inclination <= -1)"
            }
        ));
    }
    for d in &tree.dead {
        out.push_str(&format!(
            "dead end at node {}: multiplicity {}, conjugates {}\n",
            d.node, d.multiplicity, d.conjugacy_degree
        ));
    }
    out
}

fn point_json(p: &Point) -> Value {
    json!([exponent_json(&p.0), p.1])
}

pub fn polygon_json(r: &RiccatiOperator) -> puiseux_riccati::Result<Value> {
    let p = compute_polygon(r)?;
    let mut edges = Vec::new();
    for e in &p.edges {
        let h = characteristic(r, e)?.h;
        edges.push(json!({
            "upper": point_json(&e.upper),
            "lower": point_json(&e.lower),
            "mu": exponent_json(&e.mu),
            "H": h.coeffs().iter().map(element_json).collect::<Vec<_>>(),
            "leading_term_identity": leading_term_identity_applies(r, e),
        }));
    }
    Ok(json!({
        "marked_points": p.marked_points.iter().map(point_json).collect::<Vec<_>>(),
        "vertices": p.vertices.iter().map(point_json).collect::<Vec<_>>(),
        "has_infinite_edge": p.has_infinite_edge,
        "edges": edges,
    }))
}

pub fn polygon_text(r: &RiccatiOperator) -> puiseux_riccati::Result<String> {
    let p = compute_polygon(r)?;
    let pt = |p: &Point| format!("({}, {})", format_exponent(&p.0), p.1);
    let mut out = format!(
        "vertices: {}\n",
        p.vertices.iter().map(pt).collect::<Vec<_>>().join(" ")
    );
    if p.has_infinite_edge {
        out.push_str(&format!("infinite edge below ordinate {}\n", p.i_min()));
    }
    for e in &p.edges {
        let h = characteristic(r, e)?.h;
        out.push_str(&format!("edge {}  H = {}\n", e, h));
    }
    Ok(out)
}
