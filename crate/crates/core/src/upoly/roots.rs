//! Roots of polynomials, adjoining generators as needed.

use crate::error::{Error, Result};
use crate::numfield::{ExtensionTower, FieldElement};

use super::Poly;

/// Default maximum number of levels in any extension tower.
pub const DEFAULT_DEPTH_CAP: usize = 3;

/// One root per irreducible factor: either a root already in the base tower
/// (linear factor) or the generator of a freshly adjoined level.
#[derive(Clone, Debug)]
pub struct RootClass {
    /// Monic irreducible factor over the input tower.
    pub factor: Poly,
    pub multiplicity: usize,
    pub root: FieldElement,
    /// The input tower, extended by `factor` when its degree is ≥ 2.
    pub tower: ExtensionTower,
}

impl RootClass {
    /// Number of conjugate roots this class stands for.
    pub fn degree(&self) -> usize {
        self.factor.degree().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct RootEntry {
    pub root: FieldElement,
    pub multiplicity: usize,
    pub tower: ExtensionTower,
    /// Index of the irreducible factor (over the input tower) this root kills.
    pub class: usize,
}

/// All roots of a polynomial reachable within the depth cap.
#[derive(Clone, Debug, Default)]
pub struct RootSet {
    pub entries: Vec<RootEntry>,
    /// Factors (with multiplicity) that could not be split within the cap.
    pub unsplit: Vec<(Poly, usize)>,
}

impl RootSet {
    pub fn is_complete(&self) -> bool {
        self.unsplit.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

impl Poly {
    /// One representative root per irreducible factor over `tower`.
    ///
    /// Fails with [`Error::DepthCap`] when a factor of degree ≥ 2 would need a
    /// level beyond `depth_cap`.
    pub fn root_classes(&self, tower: &ExtensionTower, depth_cap: usize) -> Result<Vec<RootClass>> {
        if self.is_constant() {
            return Err(Error::Domain("roots of a constant polynomial".into()));
        }
        let mut out = Vec::new();
        for (factor, multiplicity) in self.factor_over(tower)? {
            let (root, root_tower) = if factor.degree() == Some(1) {
                (-&factor.coeff(0), tower.clone())
            } else {
                if tower.depth() >= depth_cap {
                    return Err(Error::DepthCap {
                        cap: depth_cap,
                        factor,
                        branch: None,
                    });
                }
                let extended = tower.adjoin(&factor)?;
                (extended.generator(extended.depth()), extended)
            };
            out.push(RootClass {
                factor,
                multiplicity,
                root,
                tower: root_tower,
            });
        }
        Ok(out)
    }

    /// Every root of `self` over `tower`, adjoining generators (up to
    /// `depth_cap` levels) until each irreducible factor splits. Factors that
    /// cannot be split within the cap are reported in [`RootSet::unsplit`].
    pub fn roots_with_adjunction(&self, tower: &ExtensionTower, depth_cap: usize) -> Result<RootSet> {
        if self.is_constant() {
            return Err(Error::Domain("roots of a constant polynomial".into()));
        }
        let mut set = RootSet::default();
        for (class, (factor, multiplicity)) in self.factor_over(tower)?.into_iter().enumerate() {
            split(&factor, tower, multiplicity, class, depth_cap, &mut set)?;
        }
        Ok(set)
    }
}

fn split(
    factor: &Poly,
    tower: &ExtensionTower,
    multiplicity: usize,
    class: usize,
    depth_cap: usize,
    set: &mut RootSet,
) -> Result<()> {
    if factor.degree() == Some(1) {
        set.entries.push(RootEntry {
            root: -&factor.monic().coeff(0),
            multiplicity,
            tower: tower.clone(),
            class,
        });
        return Ok(());
    }
    if tower.depth() >= depth_cap {
        set.unsplit.push((factor.clone(), multiplicity));
        return Ok(());
    }
    let extended = tower.adjoin(factor)?;
    let theta = extended.generator(extended.depth());
    set.entries.push(RootEntry {
        root: theta.clone(),
        multiplicity,
        tower: extended.clone(),
        class,
    });
    let linear = Poly::new(vec![-&theta, FieldElement::one()], factor.variable());
    let rest = factor.exact_div(&linear)?;
    if rest.is_constant() {
        return Ok(());
    }
    for (g, _) in rest.factor_over(&extended)? {
        split(&g, &extended, multiplicity, class, depth_cap, set)?;
    }
    Ok(())
}
