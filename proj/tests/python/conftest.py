import os
import sys

# ctest exports the build-tree module location and the python package root.
for env in ("TRAVELFIELD_MODULE_DIR", "TRAVELFIELD_PKG_DIR"):
    path = os.environ.get(env)
    if path and path not in sys.path:
        sys.path.insert(0, path)
