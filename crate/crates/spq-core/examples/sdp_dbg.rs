use spq_core::numerics::sdp::{LinExpr, SdpOptions, SdpProblem, solve_sdp};

fn main() {
    let mut p = SdpProblem::new();
    let blk = p.add_psd_block(2);
    let yv = p.add_free_vars(1).start;
    p.set_objective(LinExpr::new().fr(yv, 1.0));
    p.add_constraint(LinExpr::new().psd(blk, 0, 0, 1.0).fr(yv, -1.0), 0.0);
    p.add_constraint(LinExpr::new().psd(blk, 1, 1, 1.0).fr(yv, -1.0), 0.0);
    p.add_constraint(LinExpr::new().psd(blk, 0, 1, 1.0), 1.0);
    let mut o = SdpOptions::default();
    o.verbose = true;
    o.max_iter = 40;
    let sol = solve_sdp(&p, &o);
    println!("status {:?} y {} obj {} dinf {:.3e}", sol.status, sol.free[0], sol.objective, sol.res_dual);
}
