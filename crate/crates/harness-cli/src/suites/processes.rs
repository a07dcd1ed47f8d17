use super::Ctx;
use crate::rng::replicate;
use crate::stats::{ks_test, laplace_check, z_check, LaplaceScale, StatReport, Statistic};
use besq::{besq_neg1_lifetime, euler_neg1_absorption, EulerConfig, SpindlePool};
use kernel_lab::closed_form;
use scaffold::stream::{increment, CladeSurvey, GridPoint, SplitPath, SurveyConfig};
use scaffold::{inverse_laplace_exponent, laplace_exponent};
use statrs::distribution::{ContinuousCDF, InverseGamma};
use std::collections::BTreeMap;

/// Absorption time of BESQ(-1) from 1 against `InverseGamma(3/2, 1/2)`.
pub fn besq(ctx: &mut Ctx) -> anyhow::Result<()> {
    let n = ctx.n(10_000);
    let law = InverseGamma::new(1.5, 0.5)?;
    let euler = EulerConfig { dt: ctx.cfg.delta, ..Default::default() };
    let xs: Vec<f64> = replicate(ctx.seed(), &ctx.label("euler"), n, |_, r| euler_neg1_absorption(1.0, &euler, r))
        .into_iter()
        .collect::<Result<_, _>>()?;
    ctx.report(ks_test("euler-absorption-time", &xs, |x| law.cdf(x), 0.02)?);
    let xs: Vec<f64> = replicate(ctx.seed(), &ctx.label("exact"), n, |_, r| besq_neg1_lifetime(1.0, r))
        .into_iter()
        .collect::<Result<_, _>>()?;
    ctx.report(ks_test("exact-lifetime", &xs, |x| law.cdf(x), 0.02)?);
    Ok(())
}

/// One-time Laplace exponent and the hitting-time Laplace transform.
pub fn scaffold(ctx: &mut Ctx) -> anyhow::Result<()> {
    let z = ctx.cfg.trunc_z;
    // Jumps below 1e-2 enter as a Gaussian; above that they are exact.
    let split = (z < 1e-2).then(|| SplitPath::new(z, 1e-2));
    let n = ctx.n(100_000);
    let xs = replicate(ctx.seed(), &ctx.label("increment"), n, |_, r| match &split {
        Some(s) => s.increment(1.0, r),
        None => increment(1.0, z, r),
    });
    ctx.report(laplace_check("log-laplace-x1", &xs, &[0.5, 1.0, 2.0], laplace_exponent, LaplaceScale::Log, 0.02)?);
    let n = ctx.n(10_000);
    let split = split.unwrap_or_else(|| SplitPath::new(z, 2.0 * z));
    let hits = replicate(ctx.seed(), &ctx.label("hitting"), n, |_, r| {
        f64::from(u8::from(split.hits_before_killing(1.0, 1.0, r)))
    });
    ctx.report(z_check("hitting-laplace", &hits, (-inverse_laplace_exponent(1.0)).exp())?);
    Ok(())
}

fn grid_report(id: &str, rows: &[GridPoint]) -> StatReport {
    let err = rows.iter().map(|g| (g.empirical - g.exact).abs()).fold(0.0, f64::max);
    StatReport::new(id, Statistic::AbsError, err, 0.03, rows.iter().map(|g| g.count).min().unwrap_or(0))
}

/// Clade laws from i.i.d. excursion cycles about one level.
pub fn clade_stats(ctx: &mut Ctx) -> anyhow::Result<()> {
    let total = ctx.n(100_000);
    let chunk = 5_000;
    let pool = SpindlePool::global();
    let chunks = total.div_ceil(chunk);
    let label = ctx.label("cycles");
    let parts: Vec<CladeSurvey> = replicate(ctx.seed(), &label, chunks, |k, r| {
        let cycles = chunk.min(total - k * chunk);
        CladeSurvey::run(&SurveyConfig { trunc_z: ctx.cfg.trunc_z, cycles, ..Default::default() }, pool, r)
    });
    let mut survey = parts[0].clone();
    for p in &parts[1..] {
        survey.cycles.extend(p.cycles.iter().cloned());
    }
    let complete = survey.complete();
    ctx.observe("complete-biclades", complete as f64, total);
    if complete < 5_000 {
        ctx.report(StatReport::new("complete-biclades-shortfall", Statistic::AbsError, (5_000 - complete) as f64, 0.0, complete));
    }
    let tails = [1.5, 2.0, 4.0, 8.0, 16.0];
    ctx.report(grid_report("m0-tail", &survey.m0_tail(&tails)));
    ctx.report(grid_report("zeta-plus-tail", &survey.zeta_plus_tail(&tails)));
    ctx.report(grid_report("zeta-given-m0", &survey.zeta_given_m0(&[0.25, 0.5, 1.0, 2.0, 4.0])));
    ctx.report(grid_report("m0-given-overshoot", &survey.m0_given_overshoot(&[0.25, 0.5, 1.0, 2.0, 4.0])));
    ctx.report(grid_report("zeta-given-overshoot", &survey.zeta_given_overshoot(&[1.25, 1.5, 2.0, 3.0, 4.0])));
    let none = BTreeMap::new();
    for (id, emp, form) in [
        ("nu-len-gt-1", survey.len_rate(), "clade_len_tail"),
        ("nu-j-gt-1", survey.j_rate(), "clade_j_tail"),
    ] {
        let exact = closed_form(form, &none)?.eval(1.0);
        ctx.report(StatReport::new(id, Statistic::RelError, (emp / exact - 1.0).abs(), 0.05, complete));
    }
    Ok(())
}
