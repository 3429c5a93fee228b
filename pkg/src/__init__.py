# densepoints
