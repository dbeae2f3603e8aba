use ris_models::reproduce::{reproduce, ReproduceOptions, FIGURES};

#[test]
fn every_figure_passes_its_checks() {
    let dir = tempfile::tempdir().unwrap();
    let opts = ReproduceOptions {
        out_dir: dir.path().to_path_buf(),
        ..Default::default()
    };
    for fig in FIGURES {
        let manifest = reproduce(fig, &opts).unwrap();
        let failed: Vec<_> = manifest.checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{fig}: {failed:?}");
        assert!(dir.path().join(format!("{fig}_manifest.json")).exists());
    }
}

#[test]
fn reproduction_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let opts = ReproduceOptions {
            out_dir: dir.path().to_path_buf(),
            trials: 200,
            ..Default::default()
        };
        reproduce("fig5", &opts).unwrap();
        reproduce("fig7b", &opts).unwrap();
    }
    for file in ["fig5.csv", "fig7b.csv", "fig7b_solution.json", "fig7b_desired.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(file)).unwrap(),
            std::fs::read(b.path().join(file)).unwrap(),
            "{file}"
        );
    }
}
