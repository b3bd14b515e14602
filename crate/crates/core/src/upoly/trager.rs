//! Factorization over an extension tower by reduction to the field below:
//! shift `f(C − sθ)` until its norm is squarefree, factor the norm one level
//! down (recursively, bottoming out at ℚ), and recover each factor of `f` as a
//! gcd with a norm factor.

use crate::error::{Error, Result};
use crate::numfield::{ExtensionTower, FieldElement};

use super::{factor_squarefree, Poly};

const MAX_SHIFTS: i64 = 64;

pub(crate) fn factor_squarefree_over_tower(f: &Poly, tower: &ExtensionTower) -> Result<Vec<Poly>> {
    let level = tower.depth();
    let theta = tower.generator(level);
    let below = tower.truncate(level - 1);
    for s in shift_sequence().take(2 * MAX_SHIFTS as usize) {
        let shift = &theta * &FieldElement::from_int(s);
        let g = f.shift(&-&shift);
        let n = norm(&g, tower)?;
        if !n.gcd(&n.derivative()).is_constant() {
            continue;
        }
        let norm_factors = factor_squarefree(&n, &below)?;
        if norm_factors.len() == 1 {
            return Ok(vec![f.monic()]);
        }
        let mut out = Vec::with_capacity(norm_factors.len());
        for nj in &norm_factors {
            let h = g.gcd(nj);
            if !h.is_constant() {
                out.push(h.shift(&shift).monic());
            }
        }
        return Ok(out);
    }
    Err(Error::Consistency(format!(
        "no squarefree norm found for {f} within {MAX_SHIFTS} shifts"
    )))
}

fn shift_sequence() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..).flat_map(|k| [k, -k]))
}

/// Norm of `g ∈ K_L[C]` down to `K_{L−1}[C]`, i.e. `Res_t(m_L(t), g(C)|θ_L→t)`,
/// computed by evaluating at integer points and interpolating.
pub(crate) fn norm(g: &Poly, tower: &ExtensionTower) -> Result<Poly> {
    let level = tower.depth();
    let deg = g
        .degree()
        .ok_or_else(|| Error::Domain("norm of zero polynomial".into()))?;
    let n_points = deg * tower.level_degree(level) + 1;
    let nodes: Vec<FieldElement> = (0..n_points as i64).map(FieldElement::from_int).collect();
    let values = nodes
        .iter()
        .map(|c| element_norm(&g.eval(c), tower))
        .collect::<Result<Vec<_>>>()?;
    Ok(interpolate(&nodes, &values, g.variable()))
}

/// Norm of an element of the top level of `tower` to the level below.
pub(crate) fn element_norm(a: &FieldElement, tower: &ExtensionTower) -> Result<FieldElement> {
    let level = tower.depth();
    let coords = Poly::new(a.embed(tower)?.coordinates(level), "t");
    let minpoly = tower.minpoly(level, "t");
    Ok(minpoly.resultant(&coords))
}

/// Newton interpolation through `(nodes[i], values[i])`.
fn interpolate(nodes: &[FieldElement], values: &[FieldElement], var: &str) -> Poly {
    let n = nodes.len();
    let mut dd = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &nodes[i] - &nodes[i - j];
            dd[i] = &num / &den;
        }
    }
    let mut acc = Poly::constant(dd[n - 1].clone(), var);
    for i in (0..n - 1).rev() {
        let lin = Poly::new(vec![-&nodes[i], FieldElement::one()], var);
        acc = &(&acc * &lin) + &Poly::constant(dd[i].clone(), var);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_linear_factor() {
        let t = ExtensionTower::rational()
            .adjoin(&Poly::from_ints(&[-2, 0, 1], "C"))
            .unwrap();
        let theta = t.generator(1);
        // N(C − θ) = C² − 2
        let g = Poly::new(vec![-&theta, FieldElement::one()], "C");
        assert_eq!(norm(&g, &t).unwrap(), Poly::from_ints(&[-2, 0, 1], "C"));
        // N(1 + θ) = (1+θ)(1−θ) = −1
        let a = &FieldElement::one() + &theta;
        assert_eq!(element_norm(&a, &t).unwrap(), FieldElement::from_int(-1));
    }

    #[test]
    fn sqrt3_irreducible_over_sqrt2() {
        let t = ExtensionTower::rational()
            .adjoin(&Poly::from_ints(&[-2, 0, 1], "C"))
            .unwrap();
        let f = Poly::from_ints(&[-3, 0, 1], "C");
        assert_eq!(factor_squarefree_over_tower(&f, &t).unwrap().len(), 1);
        let g = Poly::from_ints(&[-8, 0, 1], "C");
        assert_eq!(factor_squarefree_over_tower(&g, &t).unwrap().len(), 2);
    }
}
