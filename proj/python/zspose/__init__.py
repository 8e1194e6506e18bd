"""Zero-shot 6D pose estimation toolkit: Python bindings for the C++ core."""

try:
    from . import _zspose as _impl  # installed layout: extension inside the package
except ImportError:  # pragma: no cover - build-tree layout
    import _zspose as _impl

Pose = _impl.Pose
RegistrationResult = _impl.RegistrationResult
circumradius = _impl.circumradius
kabsch = _impl.kabsch
make_bump_blob = _impl.make_bump_blob
mean_shift_foreground = _impl.mean_shift_foreground
mean_shift_labels = _impl.mean_shift_labels
mesh_diameter = _impl.mesh_diameter
mspd = _impl.mspd
mssd = _impl.mssd
register_clouds = _impl.register_clouds
render_depth = _impl.render_depth
sample_so3 = _impl.sample_so3
sample_surface = _impl.sample_surface
similarity_assign = _impl.similarity_assign

__version__ = _impl.__version__

__all__ = [
    "Pose",
    "RegistrationResult",
    "circumradius",
    "kabsch",
    "make_bump_blob",
    "mean_shift_foreground",
    "mean_shift_labels",
    "mesh_diameter",
    "mspd",
    "mssd",
    "register_clouds",
    "render_depth",
    "sample_so3",
    "sample_surface",
    "similarity_assign",
]
