macro_rules! example_test {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example_test!(channel_trajectory, "channel_trajectory.rs");
example_test!(fisher_vs_zeta2, "fisher_vs_zeta2.rs");
example_test!(energy_ledger, "energy_ledger.rs");
example_test!(optimal_time, "optimal_time.rs");
example_test!(size_scaling, "size_scaling.rs");
example_test!(memory_time, "memory_time.rs");
example_test!(oracle_check, "oracle_check.rs");
example_test!(energy_budget, "energy_budget.rs");
