use num_complex::Complex64;
use wplab::fuchsian::*;
use wplab::hyperbolic::*;
use wplab::poincare::*;

fn main() {
    let g = group_from_fn(FNPoint::new(2.0 * 1.5f64.acosh(), 0.0).unwrap());
    let class = |p, q| primitive_class(Slope::new(p, q).unwrap()).unwrap();
    let alpha = CurveContext::new(&g, class(1, 0)).unwrap();
    let window = alpha.core_probes(5);
    for cutoff in [8.0, 10.0, 12.0, 14.0] {
        let nu = theta_beltrami(&g, &class(1, 0), &window, &LiftParams::with_cutoff(cutoff)).unwrap();
        let pairing = pairing_on_cylinder(&nu, &alpha);
        let lead = 0.5 * std::f64::consts::PI * alpha.length;
        println!("cutoff {cutoff}: terms={} <nu_a,nu_a> = {:.10} + {:.3e} i   lead = {:.10}  ratio = {:.8}  tail={:.2e}",
            nu.components[0].1.terms(), pairing.re, pairing.im, lead, pairing.re / lead, nu.tail_bound());
        let dv = first_variation(&nu, &alpha);
        println!("   dl_alpha(nu_alpha) = {:.10}; (2/pi)<,> = {:.10}", dv, 2.0/std::f64::consts::PI * pairing.re);
    }
    // gradient norm lower bound check: <grad,grad> = (2/pi)^2 <nu,nu> >= (2/pi) l ?
    let nu = theta_beltrami(&g, &class(1, 0), &window, &LiftParams::with_cutoff(13.0)).unwrap();
    let pairing = pairing_on_cylinder(&nu, &alpha);
    let gg = (2.0/std::f64::consts::PI).powi(2) * pairing.re;
    println!("<grad,grad> = {gg:.8} vs (2/pi) l = {:.8}", 2.0/std::f64::consts::PI * alpha.length);

    // reciprocity
    let b = CurveContext::new(&g, class(1, 1)).unwrap();
    let a = CurveContext::new(&g, class(0, 1)).unwrap();
    let params = LiftParams::with_cutoff(13.0);
    let nu_a = theta_beltrami(&g, &a.curve, &b.core_probes(5), &params).unwrap();
    let nu_b = theta_beltrami(&g, &b.curve, &a.core_probes(5), &params).unwrap();
    let ab = pairing_on_cylinder(&nu_a, &b);
    let ba = pairing_on_cylinder(&nu_b, &a);
    println!("<a,b> = {ab}; conj<b,a> = {}", ba.conj());

    // equivariance residual
    let ctx = CurveContext::new(&g, class(0, 1)).unwrap();
    let z = HPoint::new(0.17, 1.05);
    let m = g.gen_a;
    let gz = m.apply(z);
    let th = ThetaSeries::new(&g, &ctx, &[z, gz], &LiftParams::with_cutoff(13.0)).unwrap();
    let nu_z = th.eval_beltrami(z);
    let nu_gz = th.eval_beltrami(gz);
    let den = Complex64::new(m.m21, 0.0) * z.to_complex() + m.m22;
    let gp = 1.0 / (den * den);
    let t1 = nu_gz * gp.conj() / gp;
    println!("equivariance: nu_z={nu_z} transported={t1} diff={:.3e} tail={:.3e}", (t1-nu_z).norm(), th.tail_bound);
}
