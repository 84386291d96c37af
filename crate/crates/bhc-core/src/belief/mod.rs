//! Basic belief assignments and their algebra: conjunctive and Dempster
//! combination, and the pignistic probability transform.
//!
//! A mass function distributes one unit of belief over subsets of a finite
//! frame of discernment. The conjunctive rule combines two mass functions by
//! intersecting focal sets and may place mass on the empty set (conflict);
//! Dempster's rule is the conjunctive rule followed by removing the conflict
//! mass and renormalizing. The pignistic transform spreads each focal mass
//! uniformly over its elements to obtain a probability distribution for
//! decision making.

mod subset;

pub use subset::Subset;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Masses smaller than this are pruned after combination, with the remainder
/// renormalized, so focal maps stay sparse.
const PRUNE_EPS: f64 = 1e-12;

/// Tolerance on the sum-to-one constraint of a mass function.
const SUM_TOL: f64 = 1e-9;

/// A finite frame of discernment: an ordered list of unique element ids.
///
/// Subsets are encoded against this order, so the order is fixed at
/// construction.
#[derive(Debug, Clone)]
pub struct Frame {
    elements: Vec<u32>,
    index: HashMap<u32, usize>,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Frame {}

impl Frame {
    /// Build a frame from element ids. Ids must be unique and nonempty.
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidMass("frame must have at least one element".into()));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (pos, &e) in elements.iter().enumerate() {
            if index.insert(e, pos).is_some() {
                return Err(Error::InvalidMass(format!("duplicate frame element {e}")));
            }
        }
        Ok(Self { elements, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    /// Position of an element in the frame order.
    pub fn position(&self, element: u32) -> Option<usize> {
        self.index.get(&element).copied()
    }

    /// Encode a list of element ids as a subset of this frame.
    pub fn subset_of(&self, elements: &[u32]) -> Result<Subset> {
        let mut positions = Vec::with_capacity(elements.len());
        for &e in elements {
            positions.push(self.position(e).ok_or(Error::NotASubset)?);
        }
        Ok(Subset::from_positions(&positions, self.len()))
    }

    /// Decode a subset back into element ids, in frame order.
    pub fn elements_of(&self, subset: &Subset) -> Vec<u32> {
        subset.positions().iter().map(|&p| self.elements[p]).collect()
    }
}

/// A basic belief assignment: positive masses on subsets of a frame, summing
/// to one. The empty set is a legal focal set (conflict mass).
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    focal: BTreeMap<Subset, f64>,
}

impl MassFunction {
    /// Build a mass function from focal-set entries, validating the bba
    /// constraints: masses in [0, 1], subsets within the frame, sum equal to
    /// one within tolerance. Zero-mass entries are dropped.
    pub fn new(frame: Frame, entries: Vec<(Subset, f64)>) -> Result<Self> {
        let mut focal: BTreeMap<Subset, f64> = BTreeMap::new();
        let mut sum = 0.0;
        for (set, mass) in entries {
            if !set.fits_universe(frame.len()) {
                return Err(Error::NotASubset);
            }
            if !(0.0..=1.0 + SUM_TOL).contains(&mass) || mass.is_nan() {
                return Err(Error::InvalidMass(format!("mass {mass} outside [0, 1]")));
            }
            sum += mass;
            if mass > 0.0 {
                *focal.entry(set).or_insert(0.0) += mass;
            }
        }
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidMass(format!("masses sum to {sum}, expected 1")));
        }
        Ok(Self { frame, focal })
    }

    /// The vacuous mass: all belief on the full frame (total ignorance).
    pub fn vacuous(frame: Frame) -> Self {
        let full = Subset::full(frame.len());
        let mut focal = BTreeMap::new();
        focal.insert(full, 1.0);
        Self { frame, focal }
    }

    // Internal constructor for combination results whose sum is one by
    // construction.
    fn from_normalized(frame: Frame, focal: BTreeMap<Subset, f64>) -> Self {
        Self { frame, focal }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Mass of an arbitrary subset (zero when not focal).
    pub fn mass_of(&self, set: &Subset) -> f64 {
        self.focal.get(set).copied().unwrap_or(0.0)
    }

    /// Mass of the subset containing exactly the given elements.
    pub fn mass_of_elements(&self, elements: &[u32]) -> Result<f64> {
        Ok(self.mass_of(&self.frame.subset_of(elements)?))
    }

    /// Conflict mass m(∅).
    pub fn empty_mass(&self) -> f64 {
        self.mass_of(&Subset::empty(self.frame.len()))
    }

    /// Number of focal sets.
    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    /// Focal sets and masses in an unspecified order.
    pub fn focal_iter(&self) -> impl Iterator<Item = (&Subset, f64)> {
        self.focal.iter().map(|(s, &m)| (s, m))
    }

    /// Focal sets sorted by cardinality then element positions, for
    /// deterministic output.
    pub fn focal_sorted(&self) -> Vec<(Subset, f64)> {
        let mut out: Vec<(Subset, f64)> = self.focal.iter().map(|(s, &m)| (s.clone(), m)).collect();
        out.sort_by(|(a, _), (b, _)| {
            (a.len(), a.positions()).cmp(&(b.len(), b.positions()))
        });
        out
    }

    /// Total stored mass; one within tolerance for any valid mass function.
    pub fn total_mass(&self) -> f64 {
        self.focal.values().sum()
    }

    /// Debug serialization: `{"frame":[...],"focal":[{"set":[...],"mass":x}]}`.
    ///
    /// Focal sets are ordered by cardinality then elements, so the output is
    /// byte-stable for a given mass function.
    pub fn to_debug_json(&self) -> String {
        let mut out = String::from("{\"frame\":[");
        for (i, e) in self.frame.elements().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{e}");
        }
        out.push_str("],\"focal\":[");
        for (i, (set, mass)) in self.focal_sorted().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("{\"set\":[");
            for (j, e) in self.frame.elements_of(set).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{e}");
            }
            let _ = write!(out, "],\"mass\":{mass}");
            out.push('}');
        }
        out.push_str("]}");
        out
    }
}

/// Build the simple mass shape used throughout belief clustering: masses on
/// singletons plus the remainder on the full frame.
///
/// When the singleton masses sum to slightly more than one (within tolerance)
/// they are rescaled to sum to exactly one and the frame mass is zero. A sum
/// beyond tolerance is an error.
pub fn make_simple_mass(frame: Frame, singleton_masses: &[(u32, f64)]) -> Result<MassFunction> {
    let mut sum = 0.0;
    for &(e, v) in singleton_masses {
        if frame.position(e).is_none() {
            return Err(Error::NotASubset);
        }
        if !(0.0..=1.0).contains(&v) || v.is_nan() {
            return Err(Error::InvalidMass(format!("singleton mass {v} outside [0, 1]")));
        }
        sum += v;
    }
    if sum > 1.0 + SUM_TOL {
        return Err(Error::SumExceedsOne { sum });
    }
    let scale = if sum > 1.0 { 1.0 / sum } else { 1.0 };
    let universe = frame.len();
    let mut focal: BTreeMap<Subset, f64> = BTreeMap::new();
    for &(e, v) in singleton_masses {
        if v * scale > 0.0 {
            let pos = frame.position(e).expect("checked above");
            *focal.entry(Subset::singleton(pos, universe)).or_insert(0.0) += v * scale;
        }
    }
    let remainder = (1.0 - sum).max(0.0);
    if remainder > 0.0 {
        *focal.entry(Subset::full(universe)).or_insert(0.0) += remainder;
    }
    if focal.is_empty() {
        // All singleton masses were zero and the remainder vanished; this can
        // only happen for sum == 1 with every entry zero, which sum == 1
        // excludes, or an empty input with remainder 1 handled above.
        return Ok(MassFunction::vacuous(frame));
    }
    Ok(MassFunction::from_normalized(frame, focal))
}

// Prune near-zero masses and renormalize the remainder to sum to one.
fn prune_and_normalize(focal: &mut BTreeMap<Subset, f64>) {
    focal.retain(|_, m| *m >= PRUNE_EPS);
    let total: f64 = focal.values().sum();
    if total > 0.0 {
        for m in focal.values_mut() {
            *m /= total;
        }
    }
}

/// Conjunctive combination: m(C) = Σ over A ∩ B = C of m1(A)·m2(B).
///
/// Masses may land on the empty set when the sources conflict; the result
/// still sums to one.
pub fn conjunctive_combine(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    if m1.frame != m2.frame {
        return Err(Error::FrameMismatch);
    }
    let mut focal: BTreeMap<Subset, f64> = BTreeMap::new();
    for (a, ma) in m1.focal_iter() {
        for (b, mb) in m2.focal_iter() {
            let c = a.intersect(b);
            *focal.entry(c).or_insert(0.0) += ma * mb;
        }
    }
    prune_and_normalize(&mut focal);
    Ok(MassFunction::from_normalized(m1.frame.clone(), focal))
}

/// Dempster's rule: the conjunctive rule with the conflict mass removed and
/// the rest renormalized by 1 − m(∅).
pub fn dempster_combine(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    let conj = conjunctive_combine(m1, m2)?;
    normalize_conflict(conj)
}

/// Remove the mass on ∅ and renormalize. Exposed so a conjunctive result can
/// be normalized after the fact.
pub fn normalize_conflict(m: MassFunction) -> Result<MassFunction> {
    let conflict = m.empty_mass();
    if conflict >= 1.0 - 1e-12 {
        return Err(Error::TotalConflict);
    }
    if conflict == 0.0 {
        return Ok(m);
    }
    let empty = Subset::empty(m.frame.len());
    let mut focal = m.focal;
    focal.remove(&empty);
    for v in focal.values_mut() {
        *v /= 1.0 - conflict;
    }
    prune_and_normalize(&mut focal);
    Ok(MassFunction::from_normalized(m.frame, focal))
}

/// A probability distribution over a frame, obtained from a mass function by
/// the pignistic transform.
#[derive(Debug, Clone, PartialEq)]
pub struct PignisticDistribution {
    frame: Frame,
    probabilities: Vec<f64>,
}

impl PignisticDistribution {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Probability of a single element. Panics if the element is not in the
    /// frame; use [`get`](Self::get) for a fallible lookup.
    pub fn prob(&self, element: u32) -> f64 {
        self.get(element)
            .unwrap_or_else(|| panic!("element {element} is not in the frame"))
    }

    pub fn get(&self, element: u32) -> Option<f64> {
        self.frame.position(element).map(|p| self.probabilities[p])
    }

    /// Probability of a set of elements (additivity over singletons).
    pub fn prob_of_set(&self, elements: &[u32]) -> Result<f64> {
        let mut sum = 0.0;
        for &e in elements {
            sum += self
                .get(e)
                .ok_or(Error::NotASubset)?;
        }
        Ok(sum)
    }

    /// Probabilities in frame order.
    pub fn values(&self) -> &[f64] {
        &self.probabilities
    }
}

/// Pignistic transform: BetP(e) = Σ over focal B containing e of
/// m(B) / (|B| · (1 − m(∅))).
pub fn pignistic(m: &MassFunction) -> Result<PignisticDistribution> {
    let conflict = m.empty_mass();
    if conflict >= 1.0 - 1e-12 {
        return Err(Error::TotalConflict);
    }
    let norm = 1.0 - conflict;
    let mut probabilities = vec![0.0; m.frame.len()];
    for (set, mass) in m.focal_iter() {
        let card = set.len();
        if card == 0 {
            continue;
        }
        let share = mass / (card as f64 * norm);
        for pos in set.positions() {
            probabilities[pos] += share;
        }
    }
    Ok(PignisticDistribution {
        frame: m.frame.clone(),
        probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame_ab() -> Frame {
        Frame::new(vec![0, 1]).unwrap()
    }

    #[test]
    fn simple_mass_complements_to_one() {
        let m = make_simple_mass(frame_ab(), &[(0, 0.6)]).unwrap();
        assert_eq!(m.mass_of_elements(&[0]).unwrap(), 0.6);
        assert_eq!(m.mass_of_elements(&[0, 1]).unwrap(), 0.4);
    }

    #[test]
    fn simple_mass_certainty_on_singleton_frame() {
        let frame = Frame::new(vec![7]).unwrap();
        let m = make_simple_mass(frame, &[(7, 1.0)]).unwrap();
        assert_eq!(m.mass_of_elements(&[7]).unwrap(), 1.0);
        assert_eq!(m.focal_count(), 1);
    }

    #[test]
    fn simple_mass_empty_input_is_vacuous() {
        let frame = Frame::new(vec![0, 1, 2]).unwrap();
        let m = make_simple_mass(frame, &[]).unwrap();
        assert_eq!(m.mass_of_elements(&[0, 1, 2]).unwrap(), 1.0);
    }

    #[test]
    fn simple_mass_rejects_excess_sum() {
        let err = make_simple_mass(frame_ab(), &[(0, 0.8), (1, 0.4)]).unwrap_err();
        assert!(matches!(err, Error::SumExceedsOne { .. }));
    }

    #[test]
    fn singleton_frame_merges_remainder_into_single_focal() {
        // With |Ω| = 1 the full frame IS the singleton, so the remainder
        // accumulates on the same focal set.
        let frame = Frame::new(vec![3]).unwrap();
        let m = make_simple_mass(frame, &[(3, 0.6)]).unwrap();
        assert_eq!(m.focal_count(), 1);
        assert!((m.mass_of_elements(&[3]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conjunctive_matches_hand_enumeration() {
        // m1({a}) = 0.6, m1(Ω) = 0.4; m2({b}) = 0.5, m2(Ω) = 0.5.
        let m1 = make_simple_mass(frame_ab(), &[(0, 0.6)]).unwrap();
        let m2 = make_simple_mass(frame_ab(), &[(1, 0.5)]).unwrap();
        let c = conjunctive_combine(&m1, &m2).unwrap();
        assert!((c.empty_mass() - 0.30).abs() < 1e-12);
        assert!((c.mass_of_elements(&[0]).unwrap() - 0.30).abs() < 1e-12);
        assert!((c.mass_of_elements(&[1]).unwrap() - 0.20).abs() < 1e-12);
        assert!((c.mass_of_elements(&[0, 1]).unwrap() - 0.20).abs() < 1e-12);
    }

    #[test]
    fn vacuous_is_neutral_for_conjunctive() {
        let m2 = make_simple_mass(frame_ab(), &[(0, 0.3), (1, 0.25)]).unwrap();
        let v = MassFunction::vacuous(frame_ab());
        let c = conjunctive_combine(&v, &m2).unwrap();
        for (set, mass) in m2.focal_iter() {
            assert!((c.mass_of(set) - mass).abs() < 1e-12);
        }
    }

    #[test]
    fn conjunctive_total_conflict() {
        let m1 = make_simple_mass(frame_ab(), &[(0, 1.0)]).unwrap();
        let m2 = make_simple_mass(frame_ab(), &[(1, 1.0)]).unwrap();
        let c = conjunctive_combine(&m1, &m2).unwrap();
        assert!((c.empty_mass() - 1.0).abs() < 1e-12);
        assert!(matches!(dempster_combine(&m1, &m2), Err(Error::TotalConflict)));
    }

    #[test]
    fn dempster_normalizes_the_conjunctive_result() {
        let m1 = make_simple_mass(frame_ab(), &[(0, 0.6)]).unwrap();
        let m2 = make_simple_mass(frame_ab(), &[(1, 0.5)]).unwrap();
        let d = dempster_combine(&m1, &m2).unwrap();
        assert!((d.mass_of_elements(&[0]).unwrap() - 3.0 / 7.0).abs() < 1e-12);
        assert!((d.mass_of_elements(&[1]).unwrap() - 2.0 / 7.0).abs() < 1e-12);
        assert!((d.mass_of_elements(&[0, 1]).unwrap() - 2.0 / 7.0).abs() < 1e-12);
        assert_eq!(d.empty_mass(), 0.0);
    }

    #[test]
    fn dempster_with_vacuous_returns_other_operand() {
        let m2 = make_simple_mass(frame_ab(), &[(0, 0.45), (1, 0.25)]).unwrap();
        let v = MassFunction::vacuous(frame_ab());
        let d = dempster_combine(&v, &m2).unwrap();
        for (set, mass) in m2.focal_iter() {
            assert!((d.mass_of(set) - mass).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_mismatch_is_rejected() {
        let m1 = MassFunction::vacuous(Frame::new(vec![0, 1]).unwrap());
        let m2 = MassFunction::vacuous(Frame::new(vec![0, 2]).unwrap());
        assert!(matches!(conjunctive_combine(&m1, &m2), Err(Error::FrameMismatch)));
    }

    #[test]
    fn pignistic_of_vacuous_is_uniform() {
        let frame = Frame::new(vec![0, 1, 2, 3]).unwrap();
        let p = pignistic(&MassFunction::vacuous(frame)).unwrap();
        for &e in &[0u32, 1, 2, 3] {
            assert!((p.prob(e) - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn pignistic_handles_conflict_mass() {
        // m(∅) = 0.30, m({a}) = 0.30, m({b}) = 0.20, m(Ω) = 0.20.
        let m1 = make_simple_mass(frame_ab(), &[(0, 0.6)]).unwrap();
        let m2 = make_simple_mass(frame_ab(), &[(1, 0.5)]).unwrap();
        let c = conjunctive_combine(&m1, &m2).unwrap();
        let p = pignistic(&c).unwrap();
        assert!((p.prob(0) - 4.0 / 7.0).abs() < 1e-12);
        assert!((p.prob(1) - 3.0 / 7.0).abs() < 1e-12);
        assert!((p.values().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pignistic_of_certainty() {
        let m = make_simple_mass(frame_ab(), &[(0, 1.0)]).unwrap();
        let p = pignistic(&m).unwrap();
        assert_eq!(p.prob(0), 1.0);
        assert_eq!(p.prob(1), 0.0);
    }

    #[test]
    fn pignistic_rejects_total_conflict() {
        let m1 = make_simple_mass(frame_ab(), &[(0, 1.0)]).unwrap();
        let m2 = make_simple_mass(frame_ab(), &[(1, 1.0)]).unwrap();
        let c = conjunctive_combine(&m1, &m2).unwrap();
        assert!(matches!(pignistic(&c), Err(Error::TotalConflict)));
    }

    #[test]
    fn prob_of_set_is_additive() {
        let frame = Frame::new(vec![0, 1, 2]).unwrap();
        let m = make_simple_mass(frame, &[(0, 0.5), (1, 0.2)]).unwrap();
        let p = pignistic(&m).unwrap();
        let s = p.prob_of_set(&[0, 1]).unwrap();
        assert!((s - (p.prob(0) + p.prob(1))).abs() < 1e-12);
    }

    #[test]
    fn frame_rejects_duplicates_and_emptiness() {
        assert!(Frame::new(vec![]).is_err());
        assert!(Frame::new(vec![1, 2, 1]).is_err());
        let f = Frame::new(vec![3, 1, 2]).unwrap();
        assert_eq!(f.position(1), Some(1));
        assert_eq!(f.position(9), None);
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Frame>();
        assert_send_sync::<MassFunction>();
        assert_send_sync::<PignisticDistribution>();
    }

    #[test]
    fn debug_json_is_stable() {
        let m = make_simple_mass(frame_ab(), &[(0, 0.6)]).unwrap();
        let json = m.to_debug_json();
        assert_eq!(
            json,
            "{\"frame\":[0,1],\"focal\":[{\"set\":[0],\"mass\":0.6},{\"set\":[0,1],\"mass\":0.4}]}"
        );
        assert_eq!(json, m.to_debug_json());
    }
}
