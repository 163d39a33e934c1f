# Package services
