import { defineConfig } from "vitest/config";

// Server-backed suites start a real service process in beforeAll, so the
// hook timeout covers corpus synthesis plus startup.
export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    testTimeout: 60_000,
    hookTimeout: 120_000,
  },
});
