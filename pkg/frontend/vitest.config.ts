import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // e2e spawns the Python service and waits for it to come up
    testTimeout: 60000,
    hookTimeout: 60000,
  },
});
