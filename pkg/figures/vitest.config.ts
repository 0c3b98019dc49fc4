import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // the integration suite shells out to the Python CLI once to build a
    // real dataset; give it room on a loaded box
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
