//! Spectra of prime filters, upset lattices of posets, and the two unit
//! maps of the finite duality; plus the finite shadow of the Baire category
//! property of the spectrum's topology.

use std::collections::BTreeSet;

use super::{prime_filters, DesignatedJoins, Elem, Filter, FinLattice, LatticeError};

/// A finite poset over named points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    pub names: Vec<String>,
    pub leq: Vec<Vec<bool>>,
}

impl Poset {
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let n = names.len();
        for i in 0..n {
            if !leq[i][i] {
                return Err(LatticeError::NotReflexive(names[i].clone()));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(LatticeError::NotAntisymmetric(names[i].clone(), names[j].clone()));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(LatticeError::NotTransitive(
                            names[i].clone(),
                            names[j].clone(),
                            names[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(Poset { names, leq })
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    /// All up-closed subsets as bitmasks, ascending.
    pub fn upsets(&self) -> Vec<u64> {
        let n = self.size();
        assert!(n <= 20, "upset enumeration limited to small posets");
        let mut out = Vec::new();
        'mask: for mask in 0u64..(1 << n) {
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    for j in 0..n {
                        if self.leq[i][j] && mask & (1 << j) == 0 {
                            continue 'mask;
                        }
                    }
                }
            }
            out.push(mask);
        }
        out
    }
}

/// The poset of designated-join-preserving prime filters under inclusion,
/// together with the outcome of the separation check: for every a ≰ b some
/// filter contains a but not b.
#[derive(Debug, Clone)]
pub struct SpectralPoset {
    pub filters: Vec<Filter>,
    pub poset: Poset,
    /// A pair (a, b) with a ≰ b that no filter separates, if any.
    pub separation_failure: Option<(Elem, Elem)>,
}

pub fn spectrum(l: &FinLattice, s: &DesignatedJoins) -> SpectralPoset {
    let filters = prime_filters(l, s);
    let n = filters.len();
    let names: Vec<String> = filters.iter().map(|f| f.format(l)).collect();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            leq[i][j] = filters[i].members.is_subset(&filters[j].members);
        }
    }
    let poset = Poset::new(names, leq).expect("inclusion is a partial order");
    let mut separation_failure = None;
    'outer: for a in 0..l.size() {
        for b in 0..l.size() {
            if !l.le(a, b) && !filters.iter().any(|f| f.contains(a) && !f.contains(b)) {
                separation_failure = Some((a, b));
                break 'outer;
            }
        }
    }
    SpectralPoset { filters, poset, separation_failure }
}

/// The lattice of all up-closed subsets of a poset under intersection and
/// union. Elements are named by their point sets.
pub fn upsets_lattice(p: &Poset) -> FinLattice {
    let masks = p.upsets();
    let names: Vec<String> = masks
        .iter()
        .map(|&m| {
            let pts: Vec<&str> = (0..p.size())
                .filter(|&i| m & (1 << i) != 0)
                .map(|i| p.names[i].as_str())
                .collect();
            format!("{{{}}}", pts.join(","))
        })
        .collect();
    let k = masks.len();
    let mut leq = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            leq[i][j] = masks[i] & !masks[j] == 0;
        }
    }
    FinLattice::from_leq(names, leq).expect("upsets form a lattice")
}

/// The two unit maps of the duality, element by element.
#[derive(Debug, Clone)]
pub struct DualityReport {
    /// lattice element -> upset of the spectrum (as filter indices).
    pub element_map: Vec<(String, Vec<usize>)>,
    /// The upset-lattice of the spectrum, for inspection.
    pub upsets: FinLattice,
}

/// Exhibits the isomorphism between a distributive lattice and the upset
/// lattice of its spectrum via a ↦ {P : a ∈ P}. Fails with the binary
/// distributivity witness on non-distributive input, and reports the first
/// mismatch if the unit is not an isomorphism.
pub fn duality_roundtrip(
    l: &FinLattice,
    s: &DesignatedJoins,
) -> Result<DualityReport, LatticeError> {
    if let Some((a, b, c)) = l.distributivity_witness() {
        return Err(LatticeError::NotDistributive(
            l.name(a).to_string(),
            l.name(b).to_string(),
            l.name(c).to_string(),
        ));
    }
    let spec = spectrum(l, s);
    if let Some((a, b)) = spec.separation_failure {
        return Err(LatticeError::BadFilter(format!(
            "prime filters do not separate `{}` from `{}`",
            l.name(a),
            l.name(b)
        )));
    }
    let up = upsets_lattice(&spec.poset);
    let n_filters = spec.filters.len();

    let phi = |a: Elem| -> Vec<usize> {
        (0..n_filters).filter(|&i| spec.filters[i].contains(a)).collect()
    };
    let as_mask = |set: &[usize]| set.iter().fold(0u64, |m, &i| m | (1 << i));
    // the upset lattice was built from masks in ascending order; find each
    // image there
    let masks = spec.poset.upsets();
    let mut images = BTreeSet::new();
    let mut element_map = Vec::with_capacity(l.size());
    for a in 0..l.size() {
        let img = phi(a);
        let mask = as_mask(&img);
        let idx = masks
            .iter()
            .position(|&m| m == mask)
            .ok_or_else(|| LatticeError::BadFilter(format!(
                "image of `{}` is not an upset",
                l.name(a)
            )))?;
        if !images.insert(idx) {
            return Err(LatticeError::BadFilter(format!(
                "unit map is not injective at `{}`",
                l.name(a)
            )));
        }
        element_map.push((l.name(a).to_string(), img));
    }
    if images.len() != up.size() {
        return Err(LatticeError::BadFilter(format!(
            "unit map misses {} upsets",
            up.size() - images.len()
        )));
    }
    // order preservation both ways
    for a in 0..l.size() {
        for b in 0..l.size() {
            let ma = as_mask(&element_map[a].1);
            let mb = as_mask(&element_map[b].1);
            if l.le(a, b) != (ma & !mb == 0) {
                return Err(LatticeError::BadFilter(format!(
                    "unit map does not preserve order at `{}`, `{}`",
                    l.name(a),
                    l.name(b)
                )));
            }
        }
    }
    Ok(DualityReport { element_map, upsets: up })
}

/// The point-side unit: x ↦ {upsets containing x}, which must be an order
/// isomorphism onto the spectrum of the upset lattice.
#[derive(Debug, Clone)]
pub struct PosetDualityReport {
    /// point -> index of its filter in the spectrum of the upset lattice.
    pub point_map: Vec<(String, usize)>,
}

pub fn poset_roundtrip(p: &Poset) -> Result<PosetDualityReport, LatticeError> {
    let up = upsets_lattice(p);
    let spec = spectrum(&up, &DesignatedJoins::default());
    if spec.filters.len() != p.size() {
        return Err(LatticeError::BadFilter(format!(
            "spectrum has {} points, poset has {}",
            spec.filters.len(),
            p.size()
        )));
    }
    let masks = p.upsets();
    let mut point_map = Vec::with_capacity(p.size());
    for x in 0..p.size() {
        // the filter of upsets containing x
        let members: BTreeSet<Elem> = masks
            .iter()
            .enumerate()
            .filter(|(_, &m)| m & (1 << x) != 0)
            .map(|(i, _)| i)
            .collect();
        let idx = spec
            .filters
            .iter()
            .position(|f| f.members == members)
            .ok_or_else(|| LatticeError::BadFilter(format!(
                "point `{}` does not map to a spectrum point",
                p.names[x]
            )))?;
        point_map.push((p.names[x].clone(), idx));
    }
    // injective + order-iso
    for x in 0..p.size() {
        for y in 0..p.size() {
            if x != y && point_map[x].1 == point_map[y].1 {
                return Err(LatticeError::BadFilter("point map is not injective".into()));
            }
            let fx = &spec.filters[point_map[x].1];
            let fy = &spec.filters[point_map[y].1];
            if p.leq[x][y] != fx.members.is_subset(&fy.members) {
                return Err(LatticeError::BadFilter(format!(
                    "point map does not preserve order at `{}`, `{}`",
                    p.names[x],
                    p.names[y]
                )));
            }
        }
    }
    Ok(PosetDualityReport { point_map })
}

/// Finite shadow of the Baire property: on the spectrum with basis
/// {φ(a) ∩ φ(b)ᶜ}, the intersection of all dense open sets is dense.
/// (Supersets of a dense set are dense, so checking the full family's
/// intersection covers every subfamily.)
pub fn finite_baire_shadow(l: &FinLattice, s: &DesignatedJoins) -> bool {
    let spec = spectrum(l, s);
    let n = spec.filters.len();
    assert!(n <= 20);
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    // basis sets
    let mut basis = BTreeSet::new();
    for a in 0..l.size() {
        for b in 0..l.size() {
            let mut mask = 0u64;
            for (i, f) in spec.filters.iter().enumerate() {
                if f.contains(a) && !f.contains(b) {
                    mask |= 1 << i;
                }
            }
            basis.insert(mask);
        }
    }
    let basis: Vec<u64> = basis.into_iter().collect();
    let is_open = |set: u64| {
        (0..n).all(|i| {
            set & (1 << i) == 0
                || basis.iter().any(|&b| b & (1 << i) != 0 && b & !set == 0)
        })
    };
    let is_dense = |set: u64| basis.iter().all(|&b| b == 0 || b & set != 0);
    let mut intersection = full;
    for set in 0..=full {
        if is_open(set) && is_dense(set) {
            intersection &= set;
        }
    }
    is_dense(intersection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{boolean_square, chain3, m3};

    #[test]
    fn spectrum_of_chain_is_a_chain() {
        let spec = spectrum(&chain3(), &DesignatedJoins::default());
        assert_eq!(spec.filters.len(), 2);
        assert!(spec.poset.leq[1][0] || spec.poset.leq[0][1]);
        assert!(spec.separation_failure.is_none());
    }

    #[test]
    fn spectrum_of_boolean_square_is_antichain() {
        let spec = spectrum(&boolean_square(), &DesignatedJoins::default());
        assert_eq!(spec.filters.len(), 2);
        assert!(!spec.poset.leq[0][1] && !spec.poset.leq[1][0]);
    }

    #[test]
    fn spectrum_of_trivial_lattice_is_empty() {
        let l = FinLattice::from_leq(vec!["x".into()], vec![vec![true]]).unwrap();
        let spec = spectrum(&l, &DesignatedJoins::default());
        assert!(spec.filters.is_empty());
    }

    #[test]
    fn m3_fails_separation() {
        let spec = spectrum(&m3(), &DesignatedJoins::default());
        assert!(spec.separation_failure.is_some());
    }

    #[test]
    fn upsets_of_point_and_antichain_and_chain() {
        let one = Poset::new(vec!["x".into()], vec![vec![true]]).unwrap();
        assert_eq!(upsets_lattice(&one).size(), 2);

        let anti = Poset::new(
            vec!["x".into(), "y".into()],
            vec![vec![true, false], vec![false, true]],
        )
        .unwrap();
        let sq = upsets_lattice(&anti);
        assert_eq!(sq.size(), 4);
        assert!(sq.is_distributive());

        let chain = Poset::new(
            vec!["x".into(), "y".into()],
            vec![vec![true, true], vec![false, true]],
        )
        .unwrap();
        assert_eq!(upsets_lattice(&chain).size(), 3);
    }

    #[test]
    fn duality_on_chain_and_square() {
        for l in [chain3(), boolean_square()] {
            let report = duality_roundtrip(&l, &DesignatedJoins::default()).unwrap();
            assert_eq!(report.element_map.len(), l.size());
            assert_eq!(report.upsets.size(), l.size());
        }
    }

    #[test]
    fn duality_rejects_m3() {
        assert!(matches!(
            duality_roundtrip(&m3(), &DesignatedJoins::default()),
            Err(LatticeError::NotDistributive(..))
        ));
    }

    #[test]
    fn poset_roundtrips() {
        let two_chain = Poset::new(
            vec!["x".into(), "y".into()],
            vec![vec![true, true], vec![false, true]],
        )
        .unwrap();
        let r = poset_roundtrip(&two_chain).unwrap();
        assert_eq!(r.point_map.len(), 2);
    }

    #[test]
    fn baire_shadow_small_lattices() {
        for l in [chain3(), boolean_square(), m3()] {
            assert!(finite_baire_shadow(&l, &DesignatedJoins::default()));
        }
    }
}
