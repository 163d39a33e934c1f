# Package src
