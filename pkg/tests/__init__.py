# Tests package for forestconc
