//! The recollement induced by the factorization ideal of a full
//! subcategory, verified on finite batteries of modules.
//!
//! For `j: B ↪ C` and `π: C → C/I_B` the six functors are
//! `π^* = Lan_π`, `π_* = restriction along π`, `π^! = Ran_π` and
//! `j_! = Lan_j`, `j^* = restriction along j`, `j_* = Ran_j`.

use crate::category::DgCategory;
use crate::field::Field;
use crate::functor::{full_subcategory, DgFunctor};
use crate::ideal::{descend, ideal_from_subcategory, quotient_category, Ideal, IdealError, QuotientCategory};
use crate::kan::{
    adjunction_check, faithfulness_transfer, fully_faithful_check, lan, lan_adjunction_map, lan_counit, lan_hom_map,
    ran, ran_adjunction_map, ran_hom_map, representable_battery, restriction_hom_map, KanError, Named,
};
use crate::module::{restrict_module, validate_dg_module};
use crate::nat::{dgnat_complex, z0_hom};
use crate::random::{random_module, rng_from_seed};
use crate::report::CheckReport;

/// Representables, the zero module and one seeded random module.
pub fn default_battery<F: Field>(c: &DgCategory<F>, seed: u64) -> Vec<Named<F>> {
    let mut battery = representable_battery(c);
    battery.push((
        format!("random(seed={seed})"),
        random_module(&mut rng_from_seed(seed), c),
    ));
    battery
}

/// Everything the checks were run on, with their outcome.
#[derive(Clone, Debug)]
pub struct RecollementReport<F> {
    pub category: DgCategory<F>,
    pub subset: Vec<String>,
    pub ideal: Ideal<F>,
    pub quotient: QuotientCategory<F>,
    pub inclusion: DgFunctor<F>,
    /// Modules over `C`, `C/I_B` and `B`.
    pub battery: Vec<Named<F>>,
    pub quotient_battery: Vec<Named<F>>,
    pub sub_battery: Vec<Named<F>>,
    pub checks: CheckReport,
}

impl<F: Field> RecollementReport<F> {
    pub fn passed(&self) -> bool {
        self.checks.all_passed()
    }

    pub fn battery_names(&self) -> Vec<String> {
        self.battery.iter().map(|(n, _)| n.clone()).collect()
    }

    fn projection(&self) -> &DgFunctor<F> {
        &self.quotient.projection
    }
}

fn guarded(report: &mut CheckReport, name: &str, body: impl FnOnce(&mut CheckReport) -> Result<(), KanError>) {
    let mut sub = CheckReport::new();
    if let Err(e) = body(&mut sub) {
        sub.fail("computation", e.to_string());
    }
    report.absorb(name, sub);
}

pub fn recollement_report<F: Field>(
    c: &DgCategory<F>,
    subset: &[&str],
    battery: &[Named<F>],
) -> Result<RecollementReport<F>, IdealError> {
    let ideal = ideal_from_subcategory(c, subset)?;
    let quotient = quotient_category(c, &ideal)?;
    let (sub, inclusion) = full_subcategory(c, subset)?;
    let mut out = RecollementReport {
        category: c.clone(),
        subset: subset.iter().map(|s| s.to_string()).collect(),
        ideal,
        quotient_battery: representable_battery(&quotient.quotient),
        sub_battery: representable_battery(&sub),
        quotient,
        inclusion,
        battery: battery.to_vec(),
        checks: CheckReport::new(),
    };
    let mut checks = CheckReport::new();
    for (name, m) in battery {
        let valid = m.base() == c && validate_dg_module(m).is_valid();
        checks.record(format!("battery module valid [{name}]"), valid, || {
            validate_dg_module(m).to_string()
        });
    }
    if !checks.all_passed() {
        out.checks = checks;
        return Ok(out);
    }
    let pi = out.projection().clone();
    let j = out.inclusion.clone();

    // Both adjoint triples.
    checks.absorb(
        "(π^*, π_*, π^!)",
        adjunction_check(&pi, &out.battery, &out.quotient_battery),
    );
    checks.absorb("(j_!, j^*, j_*)", adjunction_check(&j, &out.sub_battery, &out.battery));

    // Ker(j^*) = Im(π_*), both inclusions.
    guarded(&mut checks, "Ker(j^*) = Im(π_*)", |r| {
        for (name, m) in &out.battery {
            let in_kernel = restrict_module(&j, m)?.is_zero();
            let descended = descend(&out.quotient, &out.ideal, m).ok();
            let round_trip = match &descended {
                Some(n) => restrict_module(&pi, n)? == *m,
                None => false,
            };
            r.record(
                format!("in Ker(j^*) ⇒ in Im(π_*) [{name}]"),
                !in_kernel || round_trip,
                || "vanishes on B but does not descend".to_string(),
            );
            r.record(
                format!("in Im(π_*) ⇒ in Ker(j^*) [{name}]"),
                descended.is_none() || in_kernel,
                || "descends but does not vanish on B".to_string(),
            );
            let pushed = restrict_module(&pi, &lan(&pi, m)?.output)?;
            r.record(
                format!("π_*π^* lands in Ker(j^*) [{name}]"),
                restrict_module(&j, &pushed)?.is_zero(),
                String::new,
            );
        }
        for (name, n) in &out.quotient_battery {
            let inflated = restrict_module(&pi, n)?;
            r.record(
                format!("π_* lands in Ker(j^*) [{name}]"),
                restrict_module(&j, &inflated)?.is_zero(),
                String::new,
            );
            let back = descend(&out.quotient, &out.ideal, &inflated)
                .map(|d| d == *n)
                .unwrap_or(false);
            r.record(format!("π_* inflation descends back [{name}]"), back, String::new);
        }
        Ok(())
    });

    // π_* is fully faithful: the assembled complexes coincide.
    guarded(&mut checks, "π_* fully faithful", |r| {
        for (a, n) in &out.quotient_battery {
            for (b, n2) in &out.quotient_battery {
                let over_q = dgnat_complex(n, n2)?;
                let over_c = dgnat_complex(&restrict_module(&pi, n)?, &restrict_module(&pi, n2)?)?;
                r.record(
                    format!("DgNat({a}, {b}) = DgNat(π_*{a}, π_*{b})"),
                    over_q.total() == over_c.total(),
                    || format!("{:?} vs {:?}", over_q.total().dims(), over_c.total().dims()),
                );
            }
            let l = lan(&pi, &restrict_module(&pi, n)?)?;
            r.record(
                format!("counit π^*π_* → 1 invertible [{a}]"),
                lan_counit(&l, n)?.is_iso(),
                String::new,
            );
        }
        Ok(())
    });

    // j_! and j_* are fully faithful.
    checks.absorb("j fully faithful", fully_faithful_check(&j));
    guarded(&mut checks, "j_!, j_* fully faithful", |r| {
        let (summary, transfer) = faithfulness_transfer(&j, &out.sub_battery)?;
        r.record("j_! fully faithful", summary.lan_fully_faithful, || {
            format!("{summary:?}")
        });
        r.record("j_* fully faithful", summary.ran_fully_faithful, || {
            format!("{summary:?}")
        });
        r.absorb("transfer", transfer);
        Ok(())
    });
    out.checks = checks;
    Ok(out)
}

/// Re-verifies the recollement axioms on the underlying categories: every
/// hom isomorphism restricted to closed degree-0 elements, kernel membership
/// through the identity in `Z⁰` and full embeddings on `Z⁰` homs.
pub fn z0_underlying<F: Field>(rec: &RecollementReport<F>) -> CheckReport {
    let mut checks = CheckReport::new();
    if rec
        .checks
        .checks
        .iter()
        .any(|c| c.name.starts_with("battery module valid") && !c.passed)
    {
        checks.fail("battery valid", "invalid modules in the battery");
        return checks;
    }
    let pi = rec.projection();
    let j = &rec.inclusion;
    guarded(&mut checks, "(R1)", |r| {
        for (a, m) in &rec.battery {
            let l = lan(pi, m)?;
            let rr = ran(pi, m)?;
            for (b, n) in &rec.quotient_battery {
                r.record(
                    format!("π^* ⊣ π_* [{a}, {b}]"),
                    lan_adjunction_map(&l, n)?.z0_bijective(),
                    String::new,
                );
                r.record(
                    format!("π_* ⊣ π^! [{b}, {a}]"),
                    ran_adjunction_map(&rr, n)?.z0_bijective(),
                    String::new,
                );
            }
        }
        for (a, m) in &rec.sub_battery {
            let l = lan(j, m)?;
            let rr = ran(j, m)?;
            for (b, n) in &rec.battery {
                r.record(
                    format!("j_! ⊣ j^* [{a}, {b}]"),
                    lan_adjunction_map(&l, n)?.z0_bijective(),
                    String::new,
                );
                r.record(
                    format!("j^* ⊣ j_* [{b}, {a}]"),
                    ran_adjunction_map(&rr, n)?.z0_bijective(),
                    String::new,
                );
            }
        }
        Ok(())
    });
    guarded(&mut checks, "(R2)", |r| {
        for (a, m) in &rec.battery {
            // An object is zero exactly when its identity is zero in Z⁰.
            let jm = restrict_module(j, m)?;
            let in_kernel = z0_hom(&jm, &jm)?.is_empty();
            let in_image = descend(&rec.quotient, &rec.ideal, m).is_ok();
            r.record(
                format!("Ker(j^*) ∋ {a} ⇔ Im(π_*) ∋ {a}"),
                in_kernel == in_image,
                || format!("kernel {in_kernel}, image {in_image}"),
            );
        }
        for (b, n) in &rec.quotient_battery {
            let jn = restrict_module(j, &restrict_module(pi, n)?)?;
            r.record(format!("π_*{b} ∈ Ker(j^*)"), z0_hom(&jn, &jn)?.is_empty(), String::new);
        }
        Ok(())
    });
    guarded(&mut checks, "(R3)", |r| {
        for (a, n) in &rec.quotient_battery {
            for (b, n2) in &rec.quotient_battery {
                let map = restriction_hom_map(pi, n, n2)?;
                r.record(format!("π_* on Z⁰({a}, {b})"), map.z0_bijective(), String::new);
            }
        }
        let lans = rec
            .sub_battery
            .iter()
            .map(|(_, m)| lan(j, m))
            .collect::<Result<Vec<_>, _>>()?;
        let rans = rec
            .sub_battery
            .iter()
            .map(|(_, m)| ran(j, m))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, (a, _)) in rec.sub_battery.iter().enumerate() {
            for (k, (b, _)) in rec.sub_battery.iter().enumerate() {
                r.record(
                    format!("j_! on Z⁰({a}, {b})"),
                    lan_hom_map(&lans[i], &lans[k])?.z0_bijective(),
                    String::new,
                );
                r.record(
                    format!("j_* on Z⁰({a}, {b})"),
                    ran_hom_map(&rans[i], &rans[k])?.z0_bijective(),
                    String::new,
                );
            }
        }
        Ok(())
    });
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::fixtures;
    use crate::module::{representable, DgModule};

    type Q = Rational;

    #[test]
    fn a2_with_b_passes() {
        let c = fixtures::a2::<Q>();
        let rec = recollement_report(&c, &["b"], &default_battery(&c, 1)).unwrap();
        assert!(rec.passed(), "{}", rec.checks);
        assert!(rec.checks.checks.len() > 100);
        let z0 = z0_underlying(&rec);
        assert!(z0.all_passed(), "{z0}");
        // Both representables are nonzero at b.
        let killed: Vec<_> = rec
            .battery
            .iter()
            .filter(|(_, m)| restrict_module(&rec.inclusion, m).unwrap().is_zero())
            .map(|(n, _)| n.clone())
            .collect();
        assert_eq!(killed, vec!["0".to_string()]);
    }

    #[test]
    fn a2_with_a_passes() {
        let c = fixtures::a2::<Q>();
        let mut battery = default_battery(&c, 2);
        // The module supported at b alone lies in Ker(j^*).
        let at_b = representable(&c, 1);
        assert!(restrict_module(&full_subcategory(&c, &["a"]).unwrap().1, &at_b)
            .unwrap()
            .is_zero());
        battery.push(("S_b".to_string(), at_b));
        let rec = recollement_report(&c, &["a"], &battery).unwrap();
        assert!(rec.passed(), "{}", rec.checks);
        assert!(z0_underlying(&rec).all_passed());
        assert_eq!(rec.ideal.dims(0, 0).values().sum::<usize>(), 1);
    }

    #[test]
    fn degenerate_k1() {
        let c = fixtures::k1::<Q>();
        let rec = recollement_report(&c, &["★"], &default_battery(&c, 3)).unwrap();
        assert!(rec.passed(), "{}", rec.checks);
        assert_eq!(rec.quotient.quotient.hom_dim(0, 0), 0);
        assert!(z0_underlying(&rec).all_passed());
    }

    #[test]
    fn d1_passes() {
        let c = fixtures::d1::<Q>();
        let rec = recollement_report(&c, &["★"], &default_battery(&c, 4)).unwrap();
        assert!(rec.passed(), "{}", rec.checks);
    }

    #[test]
    fn corrupted_battery_is_rejected_first() {
        let c = fixtures::a2::<Q>();
        let good = representable(&c, 0);
        // Hom(a, −) with the action of 1_a doubled.
        let bad = DgModule::new(&c, good.values().to_vec(), |x, y, i| {
            let a = good.action_basis(x, y, i).clone();
            if (x, y) == (0, 0) {
                a.scaled(&Q::from_int(2))
            } else {
                a
            }
        })
        .unwrap();
        let mut battery = default_battery(&c, 1);
        battery.push(("broken".to_string(), bad));
        let rec = recollement_report(&c, &["b"], &battery).unwrap();
        assert!(!rec.passed());
        assert!(rec
            .checks
            .checks
            .iter()
            .all(|c| c.name.starts_with("battery module valid")));
        let failed: Vec<_> = rec.checks.failures().map(|c| c.name.clone()).collect();
        assert_eq!(failed, vec!["battery module valid [broken]".to_string()]);
        assert!(!z0_underlying(&rec).all_passed());
    }
}
