use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use halfspace_qed::dirac::FourMomentum;
use halfspace_qed::fresnel::{left_amplitudes, right_amplitudes};
use halfspace_qed::greens::{contour_kz_integral, static_green_closed, static_green_numeric};
use halfspace_qed::kinematics::{make_wavevector, CutSide, MediumParams, Polarization, WaveVector};
use halfspace_qed::quad::Tol;
use halfspace_qed::selfenergy::{
    coulomb_shift, sigma_asympt, sigma_leading, sigma_perfect_total, sigma_radiative_quad, sigma_total_leading,
    sigma_total_leading_infinite_n, total_shift, Moments, SigmaCoefficients,
};
use halfspace_qed::validation::{criteria, run_criterion, VerifyConfig};

use crate::table::{Cell, Table};
use crate::{Command, Common};

#[derive(Args, Debug, Clone)]
pub struct FresnelArgs {
    /// Parallel wave number |k_par| (comma-separated)
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub kpar: Vec<f64>,
    /// Real vacuum-side k_z (comma-separated)
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    pub kz: Vec<f64>,
    /// Evanescent rows with k_z = -i kappa (comma-separated)
    #[arg(long, value_delimiter = ',')]
    pub kappa: Vec<f64>,
    /// Bank of the cut for evanescent rows
    #[arg(long, value_enum, default_value = "right")]
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GreensKind {
    /// Medium part of the static Green function at x = x' against distance
    Static,
    /// Residue-reduced Euclidean kernel over (rho, t, z + z')
    Kernel,
}

#[derive(Args, Debug, Clone)]
pub struct GreensArgs {
    #[arg(long, value_enum, default_value = "static")]
    pub kind: GreensKind,
    /// Euclidean radial wave number (kernel)
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub rho: Vec<f64>,
    /// cos of the Euclidean polar angle, in [0, 1] (kernel)
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub t: Vec<f64>,
    /// z + z' < 0 (kernel)
    #[arg(long, value_delimiter = ',', default_value = "-1")]
    pub zsum: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Corrupt one oracle; the suite must then fail
    #[arg(long)]
    pub inject_bug: bool,
    /// Run only these criteria (ids, comma-separated)
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
}

pub fn describe(cmd: &Command, c: &Common) -> String {
    let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let base = format!(
        "n={} p0a={} a={} pz={} ppar={} mass={} tol={:?} seed={}",
        list(&c.n),
        list(&c.p0a),
        list(&c.a),
        list(&c.pz),
        list(&c.ppar),
        c.mass,
        c.tol,
        c.seed
    );
    let extra = match cmd {
        Command::Fresnel(f) => format!(
            "fresnel {base} kpar={} kz={} kappa={} side={:?}",
            list(&f.kpar),
            list(&f.kz),
            list(&f.kappa),
            f.side
        ),
        Command::Greens(g) => format!(
            "greens {base} kind={:?} rho={} t={} zsum={}",
            g.kind,
            list(&g.rho),
            list(&g.t),
            list(&g.zsum)
        ),
        Command::Verify(v) => format!("verify seed={} inject_bug={} only={}", c.seed, v.inject_bug, v.only.join(",")),
        Command::Shift => format!("shift {base} moments={:?}", c.moments),
        Command::Asympt => format!("asympt {base}"),
        Command::Limits => format!("limits n={}", list(&c.n)),
    };
    extra
}

pub fn dispatch(cmd: &Command, c: &Common) -> Result<(Table, u8)> {
    match cmd {
        Command::Fresnel(f) => Ok((fresnel(f, c)?, 0)),
        Command::Greens(g) => Ok((greens(g, c)?, 0)),
        Command::Verify(v) => verify(v, c),
        Command::Shift => Ok((shift(c)?, 0)),
        Command::Asympt => Ok((asympt(c)?, 0)),
        Command::Limits => Ok((limits(c)?, 0)),
    }
}

/// Cartesian product in row-major order of the given lists.
fn product<const K: usize>(lists: [&[f64]; K]) -> Vec<[f64; K]> {
    let mut out = vec![[0.0; K]];
    for (i, list) in lists.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|row| {
                list.iter().map(move |&v| {
                    let mut r = row;
                    r[i] = v;
                    r
                })
            })
            .collect();
    }
    out
}

/// Evaluate rows in parallel, keeping input order.
fn rows<T: Sync, F>(items: &[T], f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(&T) -> Result<Vec<Cell>> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn fresnel(args: &FresnelArgs, c: &Common) -> Result<Table> {
    let mut headers = vec![
        "n[1]".to_string(),
        "k_par[1]".into(),
        "k_z_re[1]".into(),
        "k_z_im[1]".into(),
        "k_z_d_re[1]".into(),
        "k_z_d_im[1]".into(),
        "evanescent[bool]".into(),
    ];
    for s in Polarization::ALL {
        for q in ["rl", "tl", "rr", "tr"] {
            headers.push(format!("{q}_{}_re[1]", s.name()));
            headers.push(format!("{q}_{}_im[1]", s.name()));
        }
        headers.push(format!("rr_{}_abs[1]", s.name()));
    }
    let mut table = Table { headers, ..Default::default() };
    table.comments.push("wave numbers in units of the vacuum frequency scale; rl/tl left-incident, rr/tr right-incident".into());
    table.comments.push("coefficients are the analytic formulas in (k_z, k_z_d); left incidence is physical only for real k_z > 0".into());
    let side = match args.side {
        Side::Left => CutSide::Left,
        Side::Right => CutSide::Right,
    };
    let mut points: Vec<(f64, f64, Complex64)> = Vec::new();
    for &n in &c.n {
        for &kp in &args.kpar {
            for &kz in &args.kz {
                points.push((n, kp, Complex64::new(kz, 0.0)));
            }
            for &kappa in &args.kappa {
                points.push((n, kp, Complex64::new(0.0, -kappa)));
            }
        }
    }
    table.rows = rows(&points, |&(n, kp, kz)| {
        let k = if kz.im == 0.0 {
            make_wavevector([kp, 0.0], kz, &MediumParams::new(n)?)?
        } else {
            WaveVector::on_side([kp, 0.0], kz, side, n)?
        };
        let mut row: Vec<Cell> = vec![
            n.into(),
            kp.into(),
            k.k_z().re.into(),
            k.k_z().im.into(),
            k.k_z_d().re.into(),
            k.k_z_d().im.into(),
            k.is_evanescent().into(),
        ];
        for s in Polarization::ALL {
            let l = left_amplitudes(s, k.k_z(), k.k_z_d(), n);
            let r = right_amplitudes(s, k.k_z(), k.k_z_d(), n);
            for z in [l.r, l.t, r.r, r.t] {
                row.push(z.re.into());
                row.push(z.im.into());
            }
            row.push(r.r.norm().into());
        }
        Ok(row)
    })?;
    Ok(table)
}

fn greens(args: &GreensArgs, c: &Common) -> Result<Table> {
    match args.kind {
        GreensKind::Static => {
            let a = if c.a.is_empty() { vec![0.5, 1.0, 2.0, 5.0] } else { c.a.clone() };
            let mut t = Table::new(&["n[1]", "a[1/m]", "g_numeric[m]", "g_closed[m]", "image_potential[m]"]);
            t.comments.push("g = medium part of the static Green function at x = x' = (0, 0, -a)".into());
            t.comments.push("image_potential = (e^2 / 2) g with e^2 = 4 pi / 137".into());
            let pts = product([&c.n, &a]);
            t.rows = rows(&pts, |&[n, a]| {
                let num = static_green_numeric(n, a)?.value;
                let closed = static_green_closed(n, a)?.value;
                let e2 = MediumParams::new(n)?.e2;
                Ok(vec![n.into(), a.into(), num.into(), closed.into(), (e2 / 2.0 * num).into()])
            })?;
            Ok(t)
        }
        GreensKind::Kernel => {
            let mut t = Table::new(&["n[1]", "rho[1]", "t[1]", "z_sum[1]", "kernel_te[1]", "kernel_tm[1]"]);
            t.comments.push("k_z integral of the reflected Euclidean kernel, closed around the lower half plane".into());
            let pts = product([&c.n, &args.rho, &args.t, &args.zsum]);
            t.rows = rows(&pts, |&[n, rho, tt, z]| {
                let te = contour_kz_integral(Polarization::TE, rho, tt, z, n)?;
                let tm = contour_kz_integral(Polarization::TM, rho, tt, z, n)?;
                Ok(vec![n.into(), rho.into(), tt.into(), z.into(), te.re.into(), tm.re.into()])
            })?;
            Ok(t)
        }
    }
}

fn verify(args: &VerifyArgs, c: &Common) -> Result<(Table, u8)> {
    let cfg = VerifyConfig { seed: c.seed, inject_bug: args.inject_bug };
    let ids: Vec<String> = if args.only.is_empty() {
        criteria().iter().map(|c| c.0.to_string()).collect()
    } else {
        args.only.clone()
    };
    let mut t = Table::new(&["id", "passed[bool]", "criterion", "detail"]);
    t.comments.push(format!("seed={} inject_bug={}", cfg.seed, cfg.inject_bug));
    let mut failed = false;
    for id in &ids {
        let Some(r) = run_criterion(id, &cfg) else { bail!("unknown criterion '{id}'") };
        eprintln!("{}", r.line());
        failed |= !r.passed;
        t.push(vec![r.id.into(), r.passed.into(), r.title.into(), r.detail.into()]);
    }
    Ok((t, if failed { 3 } else { 0 }))
}

fn moments_for(c: &Common, p: &FourMomentum) -> Result<Moments> {
    match c.moments.as_deref() {
        Some(&[pz2, ppar2, pxpz, pypz]) => Ok(Moments { pz2, ppar2, pxpz, pypz }),
        Some(m) => bail!(halfspace_qed::Error::InconsistentMoments(format!("need 4 values, got {}", m.len()))),
        None => Ok(Moments::sharp(p)),
    }
}

fn shift(c: &Common) -> Result<Table> {
    let mut t = Table::new(&[
        "n[1]",
        "a[1/m]",
        "pz[m]",
        "ppar[m]",
        "p0[m]",
        "p0a[1]",
        "coulomb[m]",
        "leading[m]",
        "next_order[m]",
        "total[m]",
        "spin_flip_abs[m]",
        "delta_e_lower[m]",
        "delta_e_upper[m]",
    ]);
    t.comments.push(format!("energies in units of the mass m = {}, e^2 = 4 pi / 137", c.mass));
    t.comments.push("leading excludes Coulomb; total = coulomb + leading + next_order; spin eigenvalues to leading order".into());
    // distances: explicit --a, else a = p0a / p0 row by row
    let by_a = !c.a.is_empty();
    let dist = if by_a { &c.a } else { &c.p0a };
    let pts = product([&c.n, dist, &c.pz, &c.ppar]);
    t.rows = rows(&pts, |&[n, d, pz, ppar]| {
        let p = FourMomentum::on_shell([ppar, 0.0, pz], c.mass)?;
        let a = if by_a { d } else { d / p.p0 };
        let med = MediumParams::new(n)?;
        let s = total_shift(&med, a, &p, &moments_for(c, &p)?)?;
        let coul = coulomb_shift(&med, a, &p)?.delta_e;
        let leading = s.diagonal - coul;
        Ok(vec![
            n.into(),
            a.into(),
            pz.into(),
            ppar.into(),
            p.p0.into(),
            (p.p0 * a).into(),
            coul.into(),
            leading.into(),
            s.next_order.into(),
            (s.diagonal + s.next_order).into(),
            s.off_diagonal.norm().into(),
            s.delta_e[0].into(),
            s.delta_e[1].into(),
        ])
    })?;
    Ok(t)
}

/// Least-squares slope of `-ln y` against `ln x`.
fn fitted_order(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).filter(|(_, y)| **y > 0.0).map(|(x, y)| (x.ln(), -y.ln())).collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn asympt(c: &Common) -> Result<Table> {
    if c.p0a.len() < 3 {
        bail!(halfspace_qed::Error::domain("asympt needs at least three p0a values"));
    }
    let names = ["c0", "c_par", "c_z"];
    let mut headers = vec!["n[1]".to_string(), "p0a[1]".into(), "degenerate[bool]".into()];
    for nm in names {
        for col in ["quad", "lead", "nlo", "dev_lead", "dev_nlo", "order_lead", "order_nlo"] {
            headers.push(format!("{nm}_{col}[1]"));
        }
    }
    let mut t = Table { headers, ..Default::default() };
    t.comments.push("radiative coefficients (TE + TM) in units of -e^2 / (32 pi p0 a)".into());
    t.comments.push("dev = |quad - approx| / |nlo|; order = fitted exponent of dev against p0a over all rows of this n".into());
    let tol = Tol::from(c.tol);
    let pts = product([&c.n, &c.p0a]);
    let quads: Vec<(SigmaCoefficients, SigmaCoefficients, SigmaCoefficients)> = pts
        .par_iter()
        .map(|&[n, p0a]| -> Result<_> {
            Ok((sigma_radiative_quad(p0a, n, tol)?.coeffs, sigma_leading(n)?, sigma_asympt(p0a, n)?))
        })
        .collect::<Result<_>>()?;
    let arr = |s: &SigmaCoefficients| [s.c0, s.c_par, s.c_z];
    let per_n = c.p0a.len();
    for (block, chunk) in quads.chunks(per_n).enumerate() {
        let n = c.n[block];
        let degenerate = chunk.iter().all(|(_, _, a)| arr(a).iter().all(|v| *v == 0.0));
        let dev = |i: usize, k: usize, which: usize| {
            let (q, l, a) = &chunk[i];
            let scale = arr(a)[k].abs();
            if degenerate || scale == 0.0 {
                return 0.0;
            }
            let approx = if which == 0 { arr(l)[k] } else { arr(a)[k] };
            (arr(q)[k] - approx).abs() / scale
        };
        let mut orders = [[0.0; 2]; 3];
        for (k, o) in orders.iter_mut().enumerate() {
            for which in 0..2 {
                let ys: Vec<f64> = (0..per_n).map(|i| dev(i, k, which)).collect();
                o[which] = fitted_order(&c.p0a, &ys);
            }
        }
        for (i, (q, l, a)) in chunk.iter().enumerate() {
            let mut row: Vec<Cell> = vec![n.into(), c.p0a[i].into(), degenerate.into()];
            for k in 0..3 {
                row.extend([
                    arr(q)[k].into(),
                    arr(l)[k].into(),
                    arr(a)[k].into(),
                    dev(i, k, 0).into(),
                    dev(i, k, 1).into(),
                    orders[k][0].into(),
                    orders[k][1].into(),
                ]);
            }
            t.push(row);
        }
    }
    Ok(t)
}

fn limits(c: &Common) -> Result<Table> {
    let mut t = Table::new(&["case", "n[1]", "c_par[1]", "c_z[1]", "c0_total[1]"]);
    t.comments.push("leading coefficients including Coulomb, units of -e^2 / (32 pi p0 a); n = 0 marks a limit".into());
    t.comments.push("lim_n_inf: n -> inf after the expansion; perfect: R = -1 / +1 before it; ratio = lim / perfect".into());
    let row = |case: &str, n: f64, s: &SigmaCoefficients| -> Vec<Cell> {
        vec![case.into(), n.into(), s.c_par.into(), s.c_z.into(), s.gamma0_total().into()]
    };
    let lim = sigma_total_leading_infinite_n();
    let perf = sigma_perfect_total(1.0)?;
    t.push(row("lim_n_inf", 0.0, &lim));
    t.push(row("perfect", 0.0, &perf));
    t.push(vec![
        "ratio".into(),
        0.0.into(),
        (lim.c_par / perf.c_par).into(),
        (lim.c_z / perf.c_z).into(),
        (lim.gamma0_total() / perf.gamma0_total()).into(),
    ]);
    let mut ns = c.n.clone();
    ns.push(1e6);
    for n in ns {
        t.push(row("finite_n", n, &sigma_total_leading(n)?));
    }
    Ok(t)
}
