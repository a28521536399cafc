use std::env;
use std::path::PathBuf;

use cbindgen::{Config, Language, RenameRule};

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");

    let mut config = Config {
        language: Language::C,
        include_guard: Some("ECHELON_H".into()),
        cpp_compat: true,
        no_includes: true,
        sys_includes: vec!["stddef.h".into(), "stdint.h".into()],
        ..Config::default()
    };
    // ECH_STATUS_OK, ECH_ECHELON_PART_Z, ...
    config.enumeration.rename_variants = RenameRule::QualifiedScreamingSnakeCase;

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("Unable to generate bindings")
        .write_to_file(crate_dir.join("include/echelon.h"));
}
