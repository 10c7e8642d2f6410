import os
import sys

# Under ctest, import the module built in the build tree rather than an
# installed copy (an editable install registers its own import hook).
_build_dir = os.environ.get("SCATLAB_PYTHON_DIR")
if _build_dir:
    sys.path.insert(0, _build_dir)
    sys.meta_path[:] = [f for f in sys.meta_path if "scikit" not in type(f).__module__.lower() and
                        type(f).__name__ != "ScikitBuildRedirectingFinder"]
    sys.modules.pop("scatlab", None)
