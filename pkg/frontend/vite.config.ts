import { defineConfig } from "vite";

export default defineConfig({
  build: {
    lib: {
      entry: "src/index.ts",
      name: "CampusOpsCamera",
      formats: ["iife"],
      fileName: () => "camera-capture.js",
    },
    outDir: "dist",
    emptyOutDir: true,
    minify: false,
    sourcemap: false,
  },
});
