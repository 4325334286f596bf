use heun_core::*;
fn main() {
    let cfg = Config::default();
    for &b in &[14.528003409361439, 42.04854617905, 83.30443634254] {
        let m = model::ModeParams::new(0,0,b).unwrap();
        let t0 = std::time::Instant::now();
        match monodromy::compute_p(&m, &cfg) {
            Ok(c) => println!("beta={b}: P = {:.9} (+1/pi: {:+.2e}) k={} peak={:.1e} [{:?}]", c.p_est, c.p_est + 1.0/std::f64::consts::PI, c.k_max, c.s_peak, t0.elapsed()),
            Err(e) => println!("beta={b}: {e}"),
        }
    }
}
