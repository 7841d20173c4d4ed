# Empty file - makes this a Python package