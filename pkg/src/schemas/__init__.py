# Interchange and report schemas
