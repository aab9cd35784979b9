use jengan_core::gradcheck::{check, Op};

#[test]
fn every_op_matches_central_differences() {
    for (i, op) in Op::ALL.into_iter().enumerate() {
        let report = check(op, 100, 1000 + i as u64).unwrap();
        println!("{:>22}: max relative error {:.3e}", op.name(), report.max_rel_error);
        assert!(report.max_rel_error < 1e-4, "{}: {}", op.name(), report.max_rel_error);
    }
}
