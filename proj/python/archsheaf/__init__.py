"""Sheaf-style multi-view consistency engine for system architectures.

The heavy lifting lives in the compiled extension; this package re-exports
its surface and adds a couple of conveniences.
"""

from ._archsheaf import (  # noqa: F401
    ArchsheafError,
    CertCheck,
    CertReport,
    Conflict,
    ConflictReport,
    Diagnostic,
    FamilyMember,
    GluingResult,
    InterfacePoint,
    LoadResult,
    LocalFamily,
    Model,
    OpenSet,
    Presheaf,
    PropertyMap,
    Section,
    Site,
    SmallInstance,
    DEFAULT_ENUM_CAP,
    FORMAT_VERSION,
    __version__,
    apply_property,
    apply_property_family,
    certify,
    check_functor_laws,
    check_pairwise,
    derived_glue_commutes,
    gen_instance,
    glue,
    identity_property,
    intersect,
    is_cover,
    load_file,
    load_text,
    oracle_equivalence,
    pairwise_check_count,
    restrict,
    sha256_hex,
    union_all,
    verify_unique,
)


def load(path):
    """Load and validate an architecture file, raising on diagnostics."""
    result = load_file(str(path))
    if not result.ok:
        details = "; ".join(repr(d) for d in result.diagnostics)
        raise ArchsheafError(f"cannot load {path}: {details}")
    return result.model
