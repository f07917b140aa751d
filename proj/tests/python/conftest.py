import os
import sys

# Under ctest the module comes from the build tree; an editable install's
# import hook would otherwise shadow PYTHONPATH.
if os.environ.get("DYLP_EXPECT_BUILD_TREE"):
    sys.meta_path[:] = [f for f in sys.meta_path if "ScikitBuild" not in type(f).__name__]
