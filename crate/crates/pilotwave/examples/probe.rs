use pilotwave::hamiltonian::*;
use pilotwave::state::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let p = BellLatticeParams { pair_coupling: 0.3, ..Default::default() };
    let h = build_bell_lattice_model(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let psi0 = QuantumState::random(h.basis().clone(), &mut rng);
    let mut psi = psi0.clone();
    for k in 0..1000 {
        psi = h.evolve(&psi, 1e-3).unwrap();
        if k % 250 == 249 {
            println!("step {}: norm defect {:.3e}", k + 1, (psi.norm_squared() - 1.0).abs());
        }
    }
    // orthonormality of eigenvectors
    let dense = h.part(OperatorPart::Total).dense();
    let eig = dense.symmetric_eigen();
    let vtv = eig.eigenvectors.adjoint() * &eig.eigenvectors;
    let mut max_off = 0.0f64;
    for i in 0..vtv.nrows() {
        for j in 0..vtv.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            max_off = max_off.max((vtv[(i, j)] - num_complex::Complex64::new(target, 0.0)).norm());
        }
    }
    println!("V orthonormality defect: {:.3e}", max_off);
}
