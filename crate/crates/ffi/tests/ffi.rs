use polymass_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

const Y12: &str = r#"{"dim":3,"conormals":[[-1,0,0],[0,-1,0],[1,1,0],[0,0,-1],[1,2,1]],"support":[0,0,1,0,6],"lattice":true}"#;

fn take(s: *mut c_char) -> serde_json::Value {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { pm_string_free(s) };
    serde_json::from_str(&text).unwrap()
}

fn load(json: &str) -> *mut PmPolytope {
    let c = CString::new(json).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { pm_polytope_from_json(c.as_ptr(), &mut p) }, PmStatus::Ok);
    p
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pm_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn analyze_y_family() {
    let p = load(Y12);
    assert_eq!(unsafe { pm_polytope_dim(p) }, 3);
    assert_eq!(unsafe { pm_polytope_nfacets(p) }, 5);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pm_analyze_json(p, &mut out) }, PmStatus::Ok);
    let r = take(out);
    assert_eq!(r["dim_mass_linear"], 2);
    assert_eq!(r["essential_dim"], 1);
    assert_eq!(unsafe { pm_toric_json(p, &mut out) }, PmStatus::Ok);
    assert_eq!(take(out)["pi1_rank"], 2);
    assert_eq!(unsafe { pm_mass_linear_json(p, &mut out) }, PmStatus::Ok);
    assert_eq!(take(out)["basis"].as_array().unwrap().len(), 2);
    unsafe { pm_polytope_free(p) };
}

#[test]
fn center_of_mass_of_triangle() {
    let p = load(r#"{"dim":2,"conormals":[[-1,0],[0,-1],[1,1]],"support":[0,0,3],"lattice":true}"#);
    let kappa = CString::new("[0,0,3]").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pm_center_of_mass_json(p, kappa.as_ptr(), &mut out) }, PmStatus::Ok);
    assert_eq!(take(out), serde_json::json!([[1, 1], [1, 1]]));
    unsafe { pm_polytope_free(p) };
}

#[test]
fn error_codes() {
    let mut p = ptr::null_mut();
    let bad = CString::new("{not json").unwrap();
    assert_eq!(unsafe { pm_polytope_from_json(bad.as_ptr(), &mut p) }, PmStatus::Parse);
    assert!(p.is_null());
    assert!(!last_error().is_empty());
    let unbounded = CString::new(r#"{"dim":2,"conormals":[[-1,0],[0,-1]],"support":[0,0],"lattice":true}"#).unwrap();
    assert_eq!(unsafe { pm_polytope_from_json(unbounded.as_ptr(), &mut p) }, PmStatus::Validation);
    assert_eq!(unsafe { pm_polytope_from_json(ptr::null(), &mut p) }, PmStatus::NullPointer);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pm_analyze_json(ptr::null(), &mut out) }, PmStatus::NullPointer);
    let q = load(r#"{"dim":2,"conormals":[[-1,0],[0,-1],[1,2]],"support":[0,0,2],"lattice":false}"#);
    assert_eq!(unsafe { pm_toric_json(q, &mut out) }, PmStatus::Validation);
    assert!(last_error().contains("smooth"));
    unsafe { pm_polytope_free(q) };
    unsafe { pm_polytope_free(ptr::null_mut()) };
}

#[test]
fn verify_through_c_interface() {
    let name = CString::new("lem4.15").unwrap();
    let preset = CString::new("dim3_smooth").unwrap();
    let mut passed = 0;
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pm_verify_json(name.as_ptr(), preset.as_ptr(), 10, 7, &mut passed, &mut out) }, PmStatus::Ok);
    assert_eq!(passed, 1);
    assert_eq!(take(out)["property"], "solid-coefficient-sum");
    let unknown = CString::new("lem9.9").unwrap();
    assert_eq!(unsafe { pm_verify_json(unknown.as_ptr(), preset.as_ptr(), 10, 7, &mut passed, &mut out) }, PmStatus::Validation);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/polymass.h")).unwrap();
    for f in ["pm_polytope_from_json", "pm_polytope_free", "pm_analyze_json", "pm_mass_linear_json", "pm_toric_json", "pm_center_of_mass_json", "pm_verify_json", "pm_string_free", "pm_last_error", "typedef struct PmPolytope PmPolytope"] {
        assert!(header.contains(f), "{f} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = std::env::temp_dir().join(format!("polymass-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"polymass.h\"\nint main(void) {\n  PmPolytope *p = 0;\n  char *out = 0;\n  PmStatus s = pm_polytope_from_json(\"{}\", &p);\n  if (s == PM_STATUS_OK) { pm_analyze_json(p, &out); pm_string_free(out); }\n  pm_polytope_free(p);\n  return (int)s;\n}\n",
    )
    .unwrap();
    let status = std::process::Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    std::fs::remove_dir_all(&dir).ok();
}
