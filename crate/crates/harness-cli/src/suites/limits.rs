use super::Ctx;
use crate::rng::replicate;
use crate::stats::{ks_two_sample, StatReport, Statistic};
use crp_chain::{ranked_sample, CrpParams, Initial};
use depois::{generator_sample, GeneratorReport, SymPoly};
use ip_core::RankedSimplexPoint;
use kernel_lab::pd_stick_breaking;

/// Top table fraction of the up-down chain against `PD(1/2, 1/2)`.
pub fn crp_limit(ctx: &mut Ctx) -> anyhow::Result<()> {
    let n = ctx.n(2_000);
    let p = CrpParams::new(0.5, 0.5)?;
    let (customers, burn) = (2_000, 50.0);
    let chain = replicate(ctx.seed(), &ctx.label("chain"), n, |_, r| {
        ranked_sample(customers, p, &Initial::OrderedCrp, burn, r).map(|x| x.get(0))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let oracle = replicate(ctx.seed(), &ctx.label("sticks"), 50 * n, |_, r| pd_stick_breaking(0.5, 0.5, 1, r)[0]);
    ctx.report(ks_two_sample("top-block", &chain, &oracle, 0.05)?);
    // Sensitivity to the start: one table of everyone, same burn-in.
    let m = (n / 10).max(1);
    let single = replicate(ctx.seed(), &ctx.label("single-table"), m, |_, r| {
        ranked_sample(customers, p, &Initial::SingleTable, burn, r).map(|x| x.get(0))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    ctx.observe("top-block-mean-ordered-start", chain.iter().sum::<f64>() / n as f64, n);
    ctx.observe("top-block-mean-single-table-start", single.iter().sum::<f64>() / m as f64, m);
    ctx.observe("top-block-mean-oracle", oracle.iter().sum::<f64>() / oracle.len() as f64, oracle.len());
    Ok(())
}

fn generator_report(
    ctx: &mut Ctx,
    id: &str,
    x: &RankedSimplexPoint,
    theta: f64,
    n: usize,
) -> anyhow::Result<()> {
    let (u, budget) = (0.01, 0.1);
    let q = SymPoly::Single(1);
    let params = ctx.cfg.evolve_params();
    let samples = replicate(ctx.seed(), &ctx.label(id), n, |_, r| generator_sample(x, q, theta, u, &params, r))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let g = GeneratorReport::from_samples(&samples, q, x, theta, u, budget)?;
    let mut rep = StatReport::new(id, Statistic::AbsError, (g.quotient - g.target).abs(), 3.0 * g.se + budget, g.n);
    rep.pass = g.pass;
    ctx.report(rep);
    ctx.observe(format!("{id}-quotient"), g.quotient, g.n);
    ctx.observe(format!("{id}-lost"), g.lost as f64, n);
    Ok(())
}

/// Difference quotient of `q_1` at `x = (1, 0, ...)` against `2 B q_1`.
pub fn ekp_generator(ctx: &mut Ctx) -> anyhow::Result<()> {
    let n = ctx.n(100_000);
    let x = RankedSimplexPoint::new(vec![1.0])?;
    generator_report(ctx, "q1-theta0", &x, 0.0, n)?;
    generator_report(ctx, "q1-theta-half", &x, 0.5, (n / 4).max(2))?;
    Ok(())
}
