# Package routes
