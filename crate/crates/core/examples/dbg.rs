use opcalc::heisenberg::*;
use opcalc::leibniz::*;
use opcalc::algebra::StarAlgebra;
use num_complex::Complex64;

fn main() {
    let c = |re: f64| Complex64::new(re, 0.0);
    for n in [12usize, 16, 24] {
        let alg = GroupAlgebra::new(HeisenbergGrid::new(n, 4.0));
        let f = GroupKernel::from_fn(alg.grid, |x, y, z| c((-2.5 * (x*x+y*y+z*z)).exp())).unwrap();
        let g = GroupKernel::from_fn(alg.grid, |x, y, z| c((-3.0 * (x*x+y*y+z*z)).exp() * (1.0 + 0.5 * x))).unwrap();
        let zr = right_invariant_derivative(&alg, [0.0, 0.0, 1.0]);
        // LHS/RHS fields
        let fg = alg.mul(&f, &g);
        let lhs = zr.apply(&alg, &fg);
        let rhs = alg.mul(&zr.apply(&alg, &f), &g);
        let diff = lhs.sub(&rhs);
        // locate worst cell
        let mut worst = (0usize, 0usize, 0usize, 0.0f64);
        for i in 0..n { for j in 0..n { for k in 0..n {
            let v = diff.at(i,j,k).norm();
            if v > worst.3 { worst = (i,j,k,v); }
        }}}
        println!("n={n}: resid sup {:.3e} at {:?} (l1 {:.3e}); conv sup {:.3e}", worst.3, (worst.0,worst.1,worst.2), diff.l1_norm(), fg.sup_norm());
    }
}
