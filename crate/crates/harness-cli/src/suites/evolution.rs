use super::Ctx;
use crate::initial_state;
use crate::config::InitialSpec;
use crate::rng::replicate;
use crate::stats::{ks_test, ks_two_sample, laplace_check, z_check, LaplaceScale};
use depois::{depoissonize, trace_until};
use ip_core::IntervalPartition;
use kernel_lab::{lmb_laplace, sample_kernel_type1, sample_pdip, Pdip};
use skewer_evolve::{build_type1, immigration, single_clade, Mode};
use statrs::distribution::{ContinuousCDF, Exp, Gamma};
use statrs::function::gamma::gamma_lr;

fn indicator(b: bool) -> f64 {
    f64::from(u8::from(b))
}

/// BESQ(0) at time `y` from `a`: `Gamma(N, scale 2y)` with `N ~ Poisson(a/2y)`,
/// the `N = 0` term being the atom at 0.
pub fn besq0_cdf(a: f64, y: f64, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let mu = a / (2.0 * y);
    let mut w = (-mu).exp();
    let mut f = w;
    let mut k = 0.0;
    while k < mu + 40.0 + 10.0 * mu.sqrt() {
        k += 1.0;
        w *= mu / k;
        if x > 0.0 {
            f += w * gamma_lr(k, x / (2.0 * y));
        }
    }
    f.min(1.0)
}

/// Summary statistics compared between the pathwise and kernel constructions.
fn shape_stats(p: &IntervalPartition) -> [f64; 4] {
    [
        p.total_mass(),
        p.leftmost().unwrap_or(0.0),
        p.count_above(0.01) as f64,
        p.total_diversity().unwrap_or(0.0),
    ]
}

const SHAPE_NAMES: [&str; 4] = ["total-mass", "leftmost-mass", "blocks-above-0.01", "total-diversity"];

/// Entrance law from a single block, and the pathwise evolution against the
/// transition kernel.
pub fn kernel_vs_path(ctx: &mut Ctx) -> anyhow::Result<()> {
    let n = ctx.n(10_000);
    let a = 1.0;
    let levels = [0.25, 0.5, 1.0];
    let params = ctx.cfg.evolve_params();
    let runs = replicate(ctx.seed(), &ctx.label("path"), n, |_, r| single_clade(a, &levels, &params, r))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    for (k, &y) in levels.iter().enumerate() {
        let states: Vec<&IntervalPartition> = runs.iter().map(|c| &c.states[k]).collect();
        let alive: Vec<f64> = states.iter().map(|s| indicator(!s.is_empty())).collect();
        ctx.report(z_check(&format!("entrance-survival-y{y}"), &alive, 1.0 - (-a / (2.0 * y)).exp())?);
        let live: Vec<&&IntervalPartition> = states.iter().filter(|s| !s.is_empty()).collect();
        let left: Vec<f64> = live.iter().map(|s| s.blocks()[0]).collect();
        let rest: Vec<f64> = live.iter().map(|s| s.total_mass() - s.blocks()[0]).collect();
        ctx.report(laplace_check(
            &format!("leftmost-laplace-y{y}"),
            &left,
            &[0.5, 1.0, 2.0],
            |l| lmb_laplace(a, y, l),
            LaplaceScale::Value,
            0.01,
        )?);
        let g = Gamma::new(0.5, 1.0 / (2.0 * y))?;
        ctx.report(ks_test(&format!("remainder-mass-y{y}"), &rest, |x| g.cdf(x), 0.03)?);
    }
    let kp = ctx.cfg.kernel_params();
    let beta = IntervalPartition::finite_marked(vec![a])?;
    for (k, &y) in levels[..2].iter().enumerate() {
        let path: Vec<[f64; 4]> = runs.iter().map(|c| shape_stats(&c.states[k])).collect();
        let kernel: Vec<[f64; 4]> =
            replicate(ctx.seed(), &ctx.label(&format!("kernel-y{y}")), n, |_, r| sample_kernel_type1(&beta, y, &kp, r))
                .into_iter()
                .map(|p| p.map(|p| shape_stats(&p)))
                .collect::<Result<_, _>>()?;
        for (s, name) in SHAPE_NAMES.iter().enumerate() {
            let a: Vec<f64> = path.iter().map(|v| v[s]).collect();
            let b: Vec<f64> = kernel.iter().map(|v| v[s]).collect();
            ctx.report(ks_two_sample(&format!("{name}-y{y}"), &a, &b, 0.03)?);
        }
    }
    Ok(())
}

/// Total mass of type-1 from one unit block against BESQ(0), and of type-0 from
/// the empty partition against BESQ(1) from 0.
pub fn total_mass(ctx: &mut Ctx) -> anyhow::Result<()> {
    let n = ctx.n(10_000);
    let levels = [0.25, 0.5];
    let params = ctx.cfg.evolve_params();
    let beta = IntervalPartition::finite_marked(vec![1.0])?;
    let runs = replicate(ctx.seed(), &ctx.label("type1"), n, |_, r| build_type1(&beta, &levels, &params, r))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    for (k, &y) in levels.iter().enumerate() {
        let m: Vec<f64> = runs.iter().map(|s| s[k].total_mass()).collect();
        let dead: Vec<f64> = m.iter().map(|&x| indicator(x == 0.0)).collect();
        ctx.report(z_check(&format!("type1-atom-y{y}"), &dead, (-1.0 / (2.0 * y)).exp())?);
        ctx.report(ks_test(&format!("type1-besq0-y{y}"), &m, |x| besq0_cdf(1.0, y, x), 0.03)?);
    }
    let runs = replicate(ctx.seed(), &ctx.label("type0"), n, |_, r| immigration(&levels, &params, r))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    for (k, &y) in levels.iter().enumerate() {
        let m: Vec<f64> = runs.iter().map(|s| s[k].total_mass()).collect();
        let g = Gamma::new(0.5, 1.0 / (2.0 * y))?;
        ctx.report(ks_test(&format!("type0-gamma-y{y}"), &m, |x| g.cdf(x), 0.03)?);
    }
    Ok(())
}

/// Type-1 from `Exp(rho)`-scaled `PDIP(1/2, 0)`.
pub fn pseudo_stationarity(ctx: &mut Ctx) -> anyhow::Result<()> {
    let n = ctx.n(10_000);
    let (rho, y) = (1.0, 0.5);
    let params = ctx.cfg.evolve_params();
    let eps = ctx.cfg.eps;
    let spec = InitialSpec::ExpPdip(rho);
    let states = replicate(ctx.seed(), &ctx.label("evolve"), n, |_, r| {
        let beta = initial_state(&spec, eps, r)?;
        Ok::<_, anyhow::Error>(build_type1(&beta, &[y], &params, r)?.remove(0))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let alive: Vec<f64> = states.iter().map(|s| indicator(s.total_mass() > 0.0)).collect();
    let surv = 1.0 / (2.0 * y * rho + 1.0);
    ctx.report(z_check("survival", &alive, surv)?);
    let live: Vec<&IntervalPartition> = states.iter().filter(|s| s.total_mass() > 0.0).collect();
    let mass: Vec<f64> = live.iter().map(|s| s.total_mass()).collect();
    let law = Exp::new(rho * surv)?;
    ctx.report(ks_test("conditioned-mass", &mass, |x| law.cdf(x), 0.03)?);
    let top: Vec<f64> = live.iter().map(|s| s.ranked().get(0)).collect();
    let fresh = replicate(ctx.seed(), &ctx.label("fresh"), n, |_, r| sample_pdip(Pdip::Zero, eps, r))
        .into_iter()
        .map(|p| p.map(|p| p.ranked().get(0)))
        .collect::<Result<Vec<_>, _>>()?;
    ctx.report(ks_two_sample("top-block-shape", &top, &fresh, 0.03)?);
    Ok(())
}

/// De-Poissonized type-0 evolution from `PDIP(1/2, 1/2)` keeps its law.
pub fn stationarity(ctx: &mut Ctx) -> anyhow::Result<()> {
    let n = ctx.n(10_000);
    let u = 0.3;
    let params = ctx.cfg.evolve_params();
    let eps = ctx.cfg.eps;
    let rows = replicate(ctx.seed(), &ctx.label("evolve"), n, |_, r| {
        let beta = sample_pdip(Pdip::Half, eps, r)?;
        let trace = trace_until(&beta, Mode::Type0, u, 0.01, 0.5, &params, r)?;
        let d = depoissonize(&trace, &[u])?;
        let s = d.states.first().ok_or_else(|| anyhow::anyhow!("type-0 trace ended before u"))?;
        let k = s.ranked();
        Ok::<_, anyhow::Error>([k.get(0), k.get(1), k.get(2), s.total_diversity().unwrap_or(0.0), d.mass[0]])
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let fresh = replicate(ctx.seed(), &ctx.label("fresh"), n, |_, r| {
        sample_pdip(Pdip::Half, eps, r).map(|p| {
            let k = p.ranked();
            [k.get(0), k.get(1), k.get(2), p.total_diversity().unwrap_or(0.0)]
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    for (s, name) in ["top-1", "top-2", "top-3", "total-diversity"].iter().enumerate() {
        let a: Vec<f64> = rows.iter().map(|v| v[s]).collect();
        let b: Vec<f64> = fresh.iter().map(|v| v[s]).collect();
        ctx.report(ks_two_sample(name, &a, &b, 0.03)?);
    }
    // Mass at rho(u) against the normalized top block; no pass/fail rule.
    let xs: Vec<f64> = rows.iter().map(|v| v[4]).collect();
    let ys: Vec<f64> = rows.iter().map(|v| v[0]).collect();
    ctx.observe("corr-mass-top1", correlation(&xs, &ys), n);
    Ok(())
}

pub(crate) fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}
