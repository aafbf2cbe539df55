import { ServiceApi } from "./api.js";
import { createApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const api = new ServiceApi("");
  const app = createApp(root, api);
  api.listSessions()
    .then(({ sessions }) => {
      if (sessions.length > 0) {
        return app.loadSession(sessions[sessions.length - 1]);
      }
    })
    .catch(() => {
      // no service yet; the banner will say so on the first action
    });
}
