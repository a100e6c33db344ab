# `name` is the name of the package as used for `pip install package`
name = "pypqc"
# `path` is the name of the package for `import package`
path = name.lower().replace("-", "_").replace(" ", "_")
# Your version number should follow https://python.org/dev/peps/pep-0440 and
# https://semver.org
version = "0.1.0"
author = "Mark Watson"
author_email = "markwatson@cantab.net"
description = "Private quantum channels: quantum one-time pads, verifiers and entropy bounds"
url = "https://github.com/mwatson2/pypqc"
license = "MIT"
