use super::formula::Formula;
use super::interval::Interval;
use super::relation::{IntervalFrame, RelationId};
use crate::error::{Error, Result};
use crate::logiset::Atom;

/// Anything that can decide atoms on the intervals of one series.
pub trait IntervalModel {
    fn series_len(&self) -> usize;

    fn eval_atom(&self, atom: &Atom, w: Interval) -> Result<bool>;
}

/// Satisfaction of `phi` at world `w`. Existential modalities need a
/// witness among the accessible intervals; universal ones hold vacuously
/// when nothing is accessible.
pub fn check<M: IntervalModel + ?Sized>(phi: &Formula, model: &M, w: Interval) -> Result<bool> {
    let frame = IntervalFrame::new(model.series_len())?;
    check_in(phi, model, &frame, w)
}

/// As [`check`], reusing a precomputed frame for the model's length.
pub fn check_in<M: IntervalModel + ?Sized>(
    phi: &Formula,
    model: &M,
    frame: &IntervalFrame,
    w: Interval,
) -> Result<bool> {
    let len = model.series_len();
    if frame.series_len() != len {
        return Err(Error::invalid("frame length differs from model length"));
    }
    if !w.fits(len) {
        return Err(Error::invalid(format!("world {w} outside length {len}")));
    }
    eval(phi, model, frame, w.index(len))
}

fn eval<M: IntervalModel + ?Sized>(
    phi: &Formula,
    model: &M,
    frame: &IntervalFrame,
    world: usize,
) -> Result<bool> {
    Ok(match phi {
        Formula::True => true,
        Formula::Atom(a) => model.eval_atom(a, frame.intervals()[world])?,
        Formula::Not(f) => !eval(f, model, frame, world)?,
        Formula::And(fs) => {
            for f in fs {
                if !eval(f, model, frame, world)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(fs) => {
            for f in fs {
                if eval(f, model, frame, world)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Diamond(r, f) => {
            for &v in successors(frame, *r, world) {
                if eval(f, model, frame, v as usize)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Boxed(r, f) => {
            for &v in successors(frame, *r, world) {
                if !eval(f, model, frame, v as usize)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

fn successors(frame: &IntervalFrame, r: RelationId, world: usize) -> &[u32] {
    frame.successors(r, world)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::relation::RelationId::*;
    use crate::logiset::{compute_feature, FeatureFn, Op};

    struct Raw(Vec<f64>);

    impl IntervalModel for Raw {
        fn series_len(&self) -> usize {
            self.0.len()
        }

        fn eval_atom(&self, atom: &Atom, w: Interval) -> Result<bool> {
            if atom.attr != 0 {
                return Err(Error::UnresolvableAtom(format!("attribute {}", atom.attr)));
            }
            Ok(atom.holds(compute_feature(atom.func, &self.0, w)?))
        }
    }

    fn iv(x: usize, y: usize) -> Interval {
        Interval::new(x, y).unwrap()
    }

    #[test]
    fn vacuous_box() {
        let m = Raw(vec![1.0, 2.0, 3.0]);
        let phi = Formula::boxed(L, Formula::not(Formula::True));
        assert!(check(&phi, &m, iv(0, 3)).unwrap());
    }

    #[test]
    fn later_witness() {
        let m = Raw(vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let p = Formula::Atom(Atom::new(FeatureFn::Max, 0, Op::Ge, 5.0));
        assert!(!check(&p, &m, iv(0, 2)).unwrap());
        assert!(check(&Formula::diamond(L, p), &m, iv(0, 2)).unwrap());
    }

    #[test]
    fn unresolvable_atom() {
        let m = Raw(vec![1.0, 2.0]);
        let p = Formula::Atom(Atom::new(FeatureFn::Max, 3, Op::Ge, 5.0));
        assert!(matches!(check(&p, &m, iv(0, 2)), Err(Error::UnresolvableAtom(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_formula() -> impl Strategy<Value = Formula> {
            let leaf = (0usize..3, any::<bool>(), 0i32..6).prop_map(|(f, ge, t)| {
                Formula::Atom(Atom::new(
                    [FeatureFn::Max, FeatureFn::Min, FeatureFn::Mean][f],
                    0,
                    if ge { Op::Ge } else { Op::Le },
                    f64::from(t),
                ))
            });
            leaf.prop_recursive(3, 16, 2, |inner| {
                prop_oneof![
                    inner.clone().prop_map(Formula::not),
                    (0usize..8, inner.clone()).prop_map(|(r, f)| Formula::diamond(RelationId::ALL[r], f)),
                    (0usize..8, inner.clone()).prop_map(|(r, f)| Formula::boxed(RelationId::ALL[r], f)),
                    (inner.clone(), inner).prop_map(|(a, b)| Formula::And(vec![a, b])),
                ]
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn diamond_box_duality(
                phi in arb_formula(),
                r in 0usize..8,
                xs in prop::collection::vec((0i32..6).prop_map(f64::from), 1..6),
                wi in 0usize..21,
            ) {
                let m = Raw(xs);
                let len = m.series_len();
                let w = Interval::from_index(wi % (len * (len + 1) / 2), len);
                let r = RelationId::ALL[r];
                let dia = check(&Formula::diamond(r, phi.clone()), &m, w).unwrap();
                let boxed = check(&Formula::boxed(r, Formula::not(phi.clone())), &m, w).unwrap();
                prop_assert_eq!(dia, !boxed);
                let g = check(&Formula::diamond(G, phi.clone()), &m, w).unwrap();
                let not_box_not = !check(&Formula::boxed(G, Formula::not(phi)), &m, w).unwrap();
                prop_assert_eq!(g, not_box_not);
            }
        }
    }
}
