// In-memory session store with expiry sweeping.
const sessionTimeout = 1800;

function createSessionStore(clockSource) {
  const sessionTable = new Map();
  function sweepExpiredSessions() {
    const currentTime = clockSource.currentTime();
    for (const [sessionToken, sessionRecord] of sessionTable) {
      if (sessionRecord.expiresAt < currentTime) {
        sessionTable.delete(sessionToken);
      }
    }
  }
  return {
    createSession(userName) {
      const sessionToken = `${userName}:${clockSource.currentTime()}`;
      sessionTable.set(sessionToken, {
        userName,
        expiresAt: clockSource.currentTime() + sessionTimeout,
      });
      return sessionToken;
    },
    lookupSession(sessionToken) {
      sweepExpiredSessions();
      return sessionTable.get(sessionToken);
    },
  };
}

module.exports = { createSessionStore, sessionTimeout };
